#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use tropehrhart::catalog;
use tropehrhart::chains::{is_convex, ConvexChain, SupportNumbers};
use tropehrhart::lattice::{rat, Fan, LatticeVector, Rational, RationalVector, VPolytope};
use tropehrhart::matroid::Matroid;
use tropehrhart::tropvb::{Diagram, TropicalVectorBundle};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn lv(v: &[i64]) -> LatticeVector {
    LatticeVector(v.to_vec())
}

pub fn rv(v: &[i64]) -> RationalVector {
    RationalVector::from_ints(v)
}

/// Non-uniform matroids on at most five elements.
pub fn nonuniform_suite() -> Vec<(&'static str, Matroid)> {
    vec![
        // Cycle of a triangle plus a pendant edge.
        ("graphic triangle+edge", Matroid::new(4, &[vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()),
        ("loop", Matroid::new(4, &[vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()),
        ("parallel pair", Matroid::new(4, &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap()),
        ("two parallel classes and a loop", Matroid::new(5, &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]).unwrap()),
        (
            "rank 3 with a three-point line",
            Matroid::new(
                5,
                &tropehrhart::lattice::arith::combinations(5, 3)
                    .into_iter()
                    .filter(|b| b != &vec![0, 1, 2])
                    .collect::<Vec<_>>(),
            )
            .unwrap(),
        ),
    ]
}

/// Matroids used for random bundles.
pub fn bundle_matroids() -> Vec<Matroid> {
    vec![
        Matroid::uniform(1, 1).unwrap(),
        Matroid::uniform(1, 2).unwrap(),
        Matroid::uniform(2, 2).unwrap(),
        Matroid::uniform(2, 3).unwrap(),
        Matroid::uniform(2, 4).unwrap(),
        Matroid::uniform(3, 4).unwrap(),
        nonuniform_suite()[1].1.clone(),
        nonuniform_suite()[2].1.clone(),
    ]
}

pub fn small_fans() -> Vec<(&'static str, Fan)> {
    vec![("P1", catalog::p1_fan()), ("P2", catalog::p2_fan()), ("P1xP1", catalog::p1xp1_fan())]
}

/// A random bundle: each row is the Bergman projection of random weights;
/// draws are repeated until the common-apartment condition holds.
pub fn random_bundle(rng: &mut impl Rng, fan: &Fan, matroid: &Matroid, spread: i64) -> TropicalVectorBundle {
    for _ in 0..1000 {
        let rows: Vec<Vec<i64>> = (0..fan.rays().len())
            .map(|_| {
                let w: Vec<Rational> = (0..matroid.ground_size()).map(|_| rat(rng.gen_range(-spread..=spread))).collect();
                matroid.bergman_project(&w).iter().map(|q| q.to_integer().try_into().unwrap()).collect()
            })
            .collect();
        let d = Diagram::new(matroid.ground_size(), rows).unwrap();
        if let Ok(e) = TropicalVectorBundle::new(fan.clone(), matroid.clone(), d) {
            return e;
        }
    }
    panic!("no valid bundle found");
}

pub fn random_bundle_any(rng: &mut impl Rng, fan: &Fan) -> TropicalVectorBundle {
    let ms = bundle_matroids();
    let m = ms.choose(rng).unwrap();
    random_bundle(rng, fan, m, 2)
}

/// Hull of random lattice points in `[-k, k]^d`.
pub fn random_polytope(rng: &mut impl Rng, d: usize, k: i64, npts: usize) -> VPolytope {
    let pts: Vec<RationalVector> =
        (0..npts).map(|_| RationalVector::from_ints(&(0..d).map(|_| rng.gen_range(-k..=k)).collect::<Vec<_>>())).collect();
    VPolytope::hull(d, &pts).unwrap()
}

/// Random support numbers made convex by adding multiples of a strictly
/// convex function.
pub fn random_convex(rng: &mut impl Rng, fan: &Fan, spread: i64) -> SupportNumbers {
    let zeta = tropehrhart::chains::find_strictly_convex(fan).unwrap();
    let mut z = SupportNumbers::from_ints(&(0..fan.rays().len()).map(|_| rng.gen_range(-spread..=spread)).collect::<Vec<_>>());
    while !is_convex(fan, &z) {
        z = z.add(&zeta);
    }
    z
}

/// Random chain of up to three random polytopes with small coefficients.
pub fn random_chain(rng: &mut impl Rng, d: usize) -> ConvexChain {
    let mut c = ConvexChain::zero(d);
    for _ in 0..rng.gen_range(1..=3) {
        let npts = rng.gen_range(1..=4);
        let p = random_polytope(rng, d, 2, npts);
        let k = rng.gen_range(-2..=2i64);
        c = c.add(&ConvexChain::indicator(p).scale(k));
    }
    c
}

/// Random smooth complete fan in the plane: stellar subdivisions of `P²`
/// or `P¹×P¹` at sums of adjacent rays.
pub fn random_smooth_fan(rng: &mut impl Rng, steps: usize) -> Fan {
    let mut fan = if rng.gen_bool(0.5) { catalog::p2_fan() } else { catalog::p1xp1_fan() };
    for _ in 0..steps {
        let maxes = fan.maximal_cones().to_vec();
        let c = fan.cone(*maxes.choose(rng).unwrap()).rays.clone();
        let v = fan.ray(c[0]).add(fan.ray(c[1]));
        fan = fan.stellar_subdivision(&v).unwrap();
    }
    fan
}

/// Points of `[-k, k]^d` with denominators 1 and 2.
pub fn half_grid(d: usize, k: i64) -> Vec<RationalVector> {
    let n = (4 * k + 1) as usize;
    let mut out = Vec::new();
    let total = n.pow(d as u32);
    for mut idx in 0..total {
        let mut v = Vec::with_capacity(d);
        for _ in 0..d {
            v.push(tropehrhart::lattice::rat_frac((idx % n) as i64 - 2 * k, 2));
            idx /= n;
        }
        out.push(RationalVector(v));
    }
    out
}
