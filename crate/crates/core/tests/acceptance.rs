//! Acceptance gate: one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use tropehrhart::catalog;
use tropehrhart::chains::{brianchon_gram, invert_polytope, support_polytope, ConvexChain};
use tropehrhart::hrr::hrr_verify;
use tropehrhart::lattice::{rat, rat_frac, Fan, LatticeBox, LatticeVector, RationalVector};
use tropehrhart::matroid::Matroid;
use tropehrhart::taut::{flag_alternating_sum, TautologicalBundle};
use tropehrhart::tropvb::TropicalVectorBundle;

const AC1_LIMIT: Duration = Duration::from_secs(5);
const AC3_LIMIT: Duration = Duration::from_secs(60);
const AC6_LIMIT: Duration = Duration::from_secs(30);
const AC7_LIMIT: Duration = Duration::from_secs(120);

const AC3_RANDOM: usize = 24;
const AC4_MIN_REFINEMENTS: usize = 3;
const AC5_RANDOM: usize = 10;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {:.2?}, limit {:?}", elapsed, limit))
}

fn ac1() -> Outcome {
    let t = Instant::now();
    let e = catalog::fano_bundle();
    let h0 = e.h0_total().map_err(|x| x.to_string())?;
    let chi = e.euler_char_total().map_err(|x| x.to_string())?;
    let alpha = e.chain_alpha_verified().map_err(|x| x.to_string())?;
    let sum = alpha.lattice_sum(&e.default_box().map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
    ensure(h0 == 27 && chi == 27 && sum == 27, || format!("h0 {h0}, chi {chi}, alpha {sum}"))?;
    within(AC1_LIMIT, t.elapsed())?;
    Ok(format!("h0 = chi = alpha = 27 in {:.2?}", t.elapsed()))
}

fn ac2() -> Outcome {
    let e = catalog::fano_bundle();
    let dec = e.branch_decomposition().map_err(|x| x.to_string())?;
    let mut convex = Vec::new();
    let mut inverted = Vec::new();
    for i in 0..dec.branches().len() {
        match dec.branch_polytope_points(i).map_err(|x| x.to_string())? {
            Some(n) => convex.push(n as i64),
            None => inverted.push(dec.inverse_route_chain(i).map_err(|x| x.to_string())?.lattice_sum_default().map_err(|x| x.to_string())?),
        }
    }
    convex.sort();
    ensure(convex == [10, 19] && inverted == [-2], || format!("convex {convex:?}, inverted {inverted:?}"))?;
    Ok("branch counts 10, 19 and inverted -2".into())
}

fn random_suite(seed: u64, n: usize) -> Vec<TropicalVectorBundle> {
    let mut r = rng(seed);
    let fans = small_fans();
    (0..n).map(|i| random_bundle_any(&mut r, &fans[i % fans.len()].1)).collect()
}

fn ac3() -> Outcome {
    let t = Instant::now();
    let mut bundles = vec![catalog::fano_bundle(), catalog::u23_bundle()];
    bundles.extend(random_suite(301, AC3_RANDOM));
    let mut points = 0;
    for (i, e) in bundles.iter().enumerate() {
        let alpha = e.chain_alpha().map_err(|x| format!("bundle {i}: {x}"))?;
        let bx = e.default_box().map_err(|x| x.to_string())?;
        e.verify_alpha_on(&alpha, &bx).map_err(|x| format!("bundle {i}: {x}"))?;
        points += bx.len();
    }
    within(AC3_LIMIT, t.elapsed())?;
    Ok(format!("{} bundles, {} box points, {:.2?}", bundles.len(), points, t.elapsed()))
}

/// Distinct proper refinements: stellar subdivisions at interior points of
/// maximal cones and single-hyperplane refinements, shuffled.
fn refinements(r: &mut impl Rng, fan: &Fan) -> Vec<(String, Fan)> {
    let d = fan.ambient_dim();
    let mut stellar = Vec::new();
    for &m in fan.maximal_cones() {
        let rays = &fan.cone(m).rays;
        for w in [[1, 1], [2, 1], [1, 2]] {
            let v = rays.iter().enumerate().fold(LatticeVector::zero(d), |a, (j, &k)| a.add(&fan.ray(k).scale(w[j.min(1)])));
            stellar.push(v.primitive());
        }
    }
    let mut normals: Vec<LatticeVector> =
        LatticeBox::cube(d, 2).points().map(LatticeVector).filter(|a| !a.is_zero()).collect();
    stellar.shuffle(r);
    normals.shuffle(r);
    let mut out: Vec<(String, Fan)> = Vec::new();
    let push = |name: String, f: Fan, out: &mut Vec<(String, Fan)>| {
        let new = f.cones().len() != fan.cones().len() && !out.iter().any(|(_, g)| g.rays() == f.rays() && g.cones().len() == f.cones().len());
        if new {
            out.push((name, f));
        }
    };
    for v in stellar.iter().take(6) {
        if let Ok(f) = fan.stellar_subdivision(v) {
            push(format!("stellar {:?}", v.0), f, &mut out);
        }
        if out.len() >= 2 {
            break;
        }
    }
    for a in &normals {
        if let Ok(f) = fan.refine_by_hyperplanes(std::slice::from_ref(a)) {
            push(format!("hyperplane {:?}", a.0), f, &mut out);
        }
        if out.len() >= 4 {
            break;
        }
    }
    out
}

/// Random bundles on fans that admit proper refinements.
fn refinable_suite(seed: u64, n: usize) -> Vec<TropicalVectorBundle> {
    let mut r = rng(seed);
    let fans = [catalog::p2_fan(), catalog::p1xp1_fan()];
    (0..n).map(|i| random_bundle_any(&mut r, &fans[i % 2])).collect()
}

fn ac4() -> Outcome {
    let mut r = rng(401);
    let mut bundles = vec![catalog::fano_bundle(), catalog::u23_bundle()];
    bundles.extend(refinable_suite(402, 12));
    let mut total = 0;
    for (i, e) in bundles.iter().enumerate() {
        let refs = refinements(&mut r, e.fan());
        ensure(refs.len() >= AC4_MIN_REFINEMENTS, || format!("bundle {i}: only {} refinements", refs.len()))?;
        let bx = e.default_box().map_err(|x| x.to_string())?.pad(1);
        for (name, f) in &refs {
            let p = e.pullback(f).map_err(|x| format!("bundle {i} {name}: {x}"))?;
            for u in bx.points() {
                let (a, b) = (e.euler_char_u(&u), p.euler_char_u(&u));
                ensure(a == b, || format!("bundle {i} {name} at {u:?}: {a} vs {b}"))?;
            }
            total += 1;
        }
    }
    Ok(format!("{} bundles, {} pull-backs", bundles.len(), total))
}

fn sorted(v: &[[i64; 2]]) -> Vec<LatticeVector> {
    let mut out: Vec<LatticeVector> = v.iter().map(|x| lv(x)).collect();
    out.sort();
    out
}

fn ac5() -> Outcome {
    let e = catalog::u23_bundle();
    let res = e.split_resolution_unchecked(&[0, 0, 0]).map_err(|x| x.to_string())?;
    let s12 = e.fan().cone_index(&[0, 1]).unwrap();
    let pos = e.fan().maximal_cones().iter().position(|&m| m == s12).unwrap();
    ensure(res.parts()[0].characters_at(pos) == sorted(&[[1, 0], [1, 0], [0, 1], [0, 1], [0, 0], [0, 0]]), || "F0 mismatch".into())?;
    ensure(res.parts()[1].characters_at(pos) == sorted(&[[1, 0], [0, 1], [0, 0], [0, 0], [0, 0], [0, 0]]), || "F1 mismatch".into())?;
    for p in 0..e.fan().maximal_cones().len() {
        ensure(res.parts()[2].characters_at(p) == sorted(&[[0, 0], [0, 0]]), || format!("F2 mismatch at {p}"))?;
    }
    ensure(e.k_class_identity(&res).map_err(|x| x.to_string())?, || "identity fails on the example".into())?;
    let mut r = rng(501);
    for i in 0..AC5_RANDOM {
        let fan = random_smooth_fan(&mut r, i % 3);
        let ms = bundle_matroids();
        let m = ms.choose(&mut r).unwrap().clone();
        let e = random_bundle(&mut r, &fan, &m, 2);
        let res = e.split_resolution_default().map_err(|x| x.to_string())?;
        ensure(e.k_class_identity(&res).map_err(|x| x.to_string())?, || format!("identity fails on random bundle {i}"))?;
    }
    Ok(format!("example multisets and identity on {AC5_RANDOM} random bundles"))
}

fn ac6() -> Outcome {
    let t = Instant::now();
    for d in 0..=5 {
        let rep = hrr_verify(&catalog::line_bundle_p1(d)).map_err(|x| x.to_string())?;
        ensure(rep.equal && rep.lhs == rat(d + 1), || format!("O({d}): {} vs {}", rep.lhs, rep.rhs))?;
    }
    let rep = hrr_verify(&catalog::u23_bundle()).map_err(|x| x.to_string())?;
    ensure(rep.equal, || format!("U23: {} vs {}", rep.lhs, rep.rhs))?;
    let rep = hrr_verify(&catalog::fano_bundle()).map_err(|x| x.to_string())?;
    ensure(rep.equal && rep.rhs == 27, || format!("Fano: {} vs {}", rep.lhs, rep.rhs))?;
    within(AC6_LIMIT, t.elapsed())?;
    Ok(format!("O(d) d=0..5, U23, Fano in {:.2?}", t.elapsed()))
}

fn ac7() -> Outcome {
    let t = Instant::now();
    let mut suite: Vec<(String, Matroid)> = Vec::new();
    for m in 1..=5 {
        for k in 1..=m {
            suite.push((format!("U{k},{m}"), Matroid::uniform(k, m).unwrap()));
        }
    }
    suite.extend(nonuniform_suite().into_iter().map(|(n, m)| (n.to_string(), m)));
    let mut checked = 0;
    for (name, m) in &suite {
        let tb = TautologicalBundle::new(m).map_err(|x| x.to_string())?;
        let rep = tb.vanishing_check(m.ground_size() as i64);
        ensure(rep.all_equal, || format!("{name}: {} failures, first {:?}", rep.failures.len(), rep.failures.first()))?;
        checked += rep.checked;
    }
    let tb = TautologicalBundle::new(&Matroid::uniform(2, 3).unwrap()).map_err(|x| x.to_string())?;
    let parts = tb.chi_by_codim(&[1, 0, 0]);
    let chi = tb.chi_u(&[1, 0, 0]).map_err(|x| x.to_string())?;
    ensure(parts == [10, 11, 2] && chi.agree() && chi.generic == 1, || format!("U23 at e1: {parts:?}, {chi:?}"))?;
    within(AC7_LIMIT, t.elapsed())?;
    Ok(format!("{} matroids, {} slice characters, 10 - 11 + 2 = 1, {:.2?}", suite.len(), checked, t.elapsed()))
}

fn half_points(bx: &LatticeBox) -> Vec<RationalVector> {
    let dbl = LatticeBox::new(bx.lo.iter().map(|x| 2 * x).collect(), bx.hi.iter().map(|x| 2 * x).collect());
    dbl.points().map(|p| RationalVector(p.iter().map(|&x| rat_frac(x, 2)).collect())).collect()
}

fn ac8() -> Outcome {
    let mut r = rng(801);
    for case in 0..50 {
        let d = 1 + case % 3;
        let npts = r.gen_range(1..=d + 2);
        let p = random_polytope(&mut r, d, 2, npts);
        let c = ConvexChain::indicator(p.clone()).convolve(&invert_polytope(&p)).map_err(|x| x.to_string())?;
        let (lo, hi) = p.minkowski_sum(&p.neg()).map_err(|x| x.to_string())?.bounding_box().unwrap();
        for u in LatticeBox::new(lo, hi).pad(1).points() {
            let want = i64::from(u.iter().all(|&x| x == 0));
            ensure(c.evaluate_lattice(&u) == want, || format!("inversion case {case} at {u:?}"))?;
        }
    }
    for case in 0..50 {
        let fan = match case % 4 {
            0 => catalog::p1_fan(),
            1 => catalog::p2_fan(),
            2 => catalog::p1xp1_fan(),
            _ => random_smooth_fan(&mut r, 2),
        };
        let z = random_convex(&mut r, &fan, 3);
        let bg = brianchon_gram(&fan, &z).map_err(|x| x.to_string())?;
        let p = support_polytope(&fan, &z).map_err(|x| x.to_string())?.vertex_enumeration().map_err(|x| x.to_string())?;
        let (lo, hi) = p.bounding_box().unwrap();
        for u in half_points(&LatticeBox::new(lo, hi).pad(1)) {
            ensure(bg.evaluate(&u) == i64::from(p.contains(&u)), || format!("Brianchon-Gram case {case} at {u:?}"))?;
        }
    }
    for case in 0..100 {
        let d = r.gen_range(1..=2);
        let a = random_chain(&mut r, d);
        let b = random_chain(&mut r, d);
        let ab = a.convolve(&b).map_err(|x| x.to_string())?;
        ensure(ab.degree() == a.degree() * b.degree(), || format!("degree case {case}"))?;
    }
    let mut done = 0;
    while done < 50 {
        let d = r.gen_range(1..=3);
        let p = random_polytope(&mut r, d, 2, d + 3);
        if p.dim() != d {
            continue;
        }
        ensure(p.hrep().face_euler_sum().map_err(|x| x.to_string())? == 1, || format!("bounded face sum {:?}", p.vertices()))?;
        for f in p.faces().iter().filter(|f| f.dim == 0) {
            ensure(f.tangent_cone.face_euler_sum().map_err(|x| x.to_string())? == 0, || "unbounded face sum".into())?;
        }
        done += 1;
    }
    Ok("50 inversions, 50 Brianchon-Gram, 100 degree pairs, 50 face sums".into())
}

fn ac9() -> Outcome {
    for m in 1..=6 {
        let s = flag_alternating_sum(m);
        let want = if m % 2 == 0 { 1 } else { -1 };
        ensure(s == want, || format!("m = {m}: {s}"))?;
    }
    Ok("m = 1..6".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("AC1 Fano totals", ac1),
        ("AC2 Fano branch counts", ac2),
        ("AC3 chi equals alpha", ac3),
        ("AC4 pull-back invariance", ac4),
        ("AC5 split resolution", ac5),
        ("AC6 Riemann-Roch", ac6),
        ("AC7 tautological vanishing", ac7),
        ("AC8 chain algebra", ac8),
        ("AC9 flag lemma", ac9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
