//! Integer double description: generators of `{x : a·x >= 0 for all a}`.
//!
//! Rays carry zero sets over the processed constraints; adjacency uses the
//! combinatorial test, so no rank computations are needed in the main loop.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::arith::{dot_big, primitive_big};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Generators of a polyhedral cone: conic rays plus a lineality basis.
#[derive(Clone, Debug, Default)]
pub struct Generators {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

fn combine(s0: &BigInt, v: &[BigInt], s: &BigInt, w: &[BigInt]) -> Vec<BigInt> {
    let out: Vec<BigInt> = v.iter().zip(w).map(|(a, b)| s0 * a - s * b).collect();
    primitive_big(&out)
}

/// Computes generators of `{x in R^dim : a·x >= 0}` for the given rows.
pub fn cone_generators(constraints: &[Vec<BigInt>], dim: usize) -> Generators {
    let n = constraints.len();
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut v = vec![BigInt::zero(); dim];
            v[i] = BigInt::from(1);
            v
        })
        .collect();
    let mut rays: Vec<(Vec<BigInt>, Bits)> = Vec::new();

    for (k, a) in constraints.iter().enumerate() {
        if let Some(pos) = lineality.iter().position(|l| !dot_big(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(pos);
            let mut s0 = dot_big(a, &l0);
            if s0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let s = dot_big(a, l);
                if !s.is_zero() {
                    *l = combine(&s0, l, &s, &l0);
                }
            }
            for (r, z) in rays.iter_mut() {
                let s = dot_big(a, r);
                if !s.is_zero() {
                    *r = combine(&s0, r, &s, &l0);
                }
                z.insert(k);
            }
            let mut z = Bits::new(n);
            for j in 0..k {
                z.insert(j);
            }
            rays.push((l0, z));
            continue;
        }

        let signs: Vec<BigInt> = rays.iter().map(|(r, _)| dot_big(a, r)).collect();
        let mut next: Vec<(Vec<BigInt>, Bits)> = Vec::with_capacity(rays.len());
        for (i, (r, z)) in rays.iter().enumerate() {
            if signs[i].is_positive() {
                next.push((r.clone(), z.clone()));
            } else if signs[i].is_zero() {
                let mut z = z.clone();
                z.insert(k);
                next.push((r.clone(), z));
            }
        }
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_negative()).collect();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].1.and(&rays[q].1);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, (_, z))| t == p || t == q || !common.is_subset(z));
                if !adjacent {
                    continue;
                }
                let v = combine(&signs[p], &rays[q].0, &signs[q], &rays[p].0);
                let mut z = common;
                z.insert(k);
                next.push((v, z));
            }
        }
        rays = next;
    }

    Generators {
        rays: rays.into_iter().map(|(r, _)| r).collect(),
        lineality,
    }
}
