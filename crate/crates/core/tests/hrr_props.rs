mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use common::*;
use tropehrhart::chains::{support_polytope, SupportNumbers};
use tropehrhart::hrr::{apply_todd, bernoulli, hrr_verify, interpolate_i, interpolate_polytope, MultiPoly};
use tropehrhart::lattice::arith::binomial;
use tropehrhart::lattice::{rat, Rational};

/// `∫_{-z1}^{z2} x^k dx` shifted to `z ↦ F(z1 + a, z2 + b)`.
fn power_integral(k: u32, a: i64, b: i64) -> MultiPoly {
    let kp = k + 1;
    let top = MultiPoly::from_terms(2, [(vec![0, kp], Rational::new(1.into(), kp.into()))]);
    let sign = if kp.is_multiple_of(2) { -1 } else { 1 };
    let bottom = MultiPoly::from_terms(2, [(vec![kp, 0], Rational::new(sign.into(), kp.into()))]);
    top.add(&bottom).shift(&[rat(a), rat(b)])
}

#[test]
fn bernoulli_recurrence() {
    // Σ_{k ≤ n} C(n+1, k) B⁺_k = n + 1.
    for n in 0..14usize {
        let s: Rational = (0..=n).map(|k| Rational::from_integer(binomial(n + 1, k)) * bernoulli(k)).sum();
        assert_eq!(s, rat(n as i64 + 1), "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn todd_on_segments_sums_powers(k in 0u32..7, a in 0i64..4, b in 0i64..4) {
        let want: i64 = (-a..=b).map(|x| x.pow(k)).sum();
        prop_assert_eq!(apply_todd(&power_integral(k, a, b)), rat(want));
    }
}

#[test]
fn khovanskii_pukhlikov_on_random_polygons() {
    let mut r = rng(41);
    for case in 0..20 {
        let fan = random_smooth_fan(&mut r, case % 3);
        let z = random_convex(&mut r, &fan, 2);
        let p = support_polytope(&fan, &z).unwrap().vertex_enumeration().unwrap();
        let poly = interpolate_polytope(&fan, &z).unwrap();
        assert_eq!(apply_todd(&poly), rat(p.count_lattice_points() as i64), "case {case}");
        assert_eq!(poly.eval(&vec![rat(0); fan.rays().len()]), p.volume());
    }
}

#[test]
fn leading_part_is_rank_times_volume() {
    let mut r = rng(42);
    for case in 0..6 {
        let fans = small_fans();
        let fan = &fans[case % fans.len()].1;
        let ms = bundle_matroids();
        let m = ms.choose(&mut r).unwrap().clone();
        let e = random_bundle(&mut r, fan, &m, 2);
        let i = interpolate_i(&e).unwrap();
        let n = fan.ambient_dim() as u32;
        let vol = interpolate_polytope(fan, &SupportNumbers::zeros(fan.rays().len())).unwrap();
        assert!(i.degree() <= n, "case {case}");
        assert_eq!(i.homogeneous_part(n), vol.homogeneous_part(n).scale(&rat(e.rank() as i64)), "case {case}");
    }
}

#[test]
fn hrr_on_random_bundles() {
    let mut r = rng(43);
    for case in 0..9 {
        let fans = small_fans();
        let fan = &fans[case % fans.len()].1;
        let e = random_bundle_any(&mut r, fan);
        let rep = hrr_verify(&e).unwrap();
        assert!(rep.equal, "case {case}: {} vs {}", rep.lhs, rep.rhs);
    }
}
