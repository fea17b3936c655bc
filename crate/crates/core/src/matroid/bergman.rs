//! The lifted Bergman fan: projection, membership, apartments.

use num_traits::Zero;

use super::{ElementSet, Matroid, MatroidError};
use crate::lattice::Rational;

/// Strictly increasing chain of flats ending at the ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagOfFlats(Vec<ElementSet>);

impl FlagOfFlats {
    pub fn new(m: &Matroid, chain: Vec<ElementSet>) -> Result<FlagOfFlats, MatroidError> {
        if chain.last() != Some(&m.ground()) {
            return Err(MatroidError::NotAFlag(format!("{chain:?} does not end at the ground set")));
        }
        for w in chain.windows(2) {
            if !(w[0].is_subset(w[1]) && w[0] != w[1]) {
                return Err(MatroidError::NotAFlag(format!("{chain:?} is not strictly increasing")));
            }
        }
        if let Some(f) = chain.iter().find(|&&f| !m.is_flat(f)) {
            return Err(MatroidError::NotAFlag(format!("{f} is not a flat")));
        }
        Ok(FlagOfFlats(chain))
    }

    pub fn flats(&self) -> &[ElementSet] {
        &self.0
    }
}

/// Distinct values of `w`, largest first.
fn thresholds(w: &[Rational]) -> Vec<Rational> {
    let mut v = w.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    v.dedup();
    v
}

fn level_set(w: &[Rational], k: &Rational) -> ElementSet {
    ElementSet::from_elements(&(0..w.len()).filter(|&i| &w[i] >= k).collect::<Vec<_>>())
}

impl Matroid {
    /// Level sets `{j : w_j ≥ k}` for the distinct values `k`, largest first.
    pub fn level_sets(&self, w: &[Rational]) -> Vec<(Rational, ElementSet)> {
        thresholds(w).into_iter().map(|k| {
            let s = level_set(w, &k);
            (k, s)
        }).collect()
    }

    /// The first level set of `w` that is not a flat.
    pub fn non_flat_level(&self, w: &[Rational]) -> Option<ElementSet> {
        self.level_sets(w).into_iter().map(|(_, s)| s).find(|&s| !self.is_flat(s))
    }

    /// Nearest point of the lifted Bergman fan: `w'_i` is the largest value
    /// `k` of `w` with `i` in the closure of `{j : w_j ≥ k}`.
    pub fn bergman_project(&self, w: &[Rational]) -> Vec<Rational> {
        let mut out: Vec<Option<Rational>> = vec![None; w.len()];
        for k in thresholds(w) {
            let cl = self.closure(level_set(w, &k));
            for i in cl.iter() {
                if out[i].is_none() {
                    out[i] = Some(k.clone());
                }
            }
        }
        out.into_iter().map(|x| x.unwrap_or_else(Rational::zero)).collect()
    }

    /// Every level set of `w` is a flat.
    pub fn in_lifted_bergman(&self, w: &[Rational]) -> bool {
        self.non_flat_level(w).is_none()
    }

    /// The flag of flats formed by the level sets of a Bergman point.
    pub fn level_flag(&self, w: &[Rational]) -> Result<FlagOfFlats, MatroidError> {
        let chain: Vec<ElementSet> = self.level_sets(w).into_iter().map(|(_, s)| s).collect();
        FlagOfFlats::new(self, chain)
    }

    /// `b` is adapted to a flat `f`: `f ∩ b` spans `f`.
    pub fn basis_adapted_to(&self, b: ElementSet, f: ElementSet) -> bool {
        let part = f.intersection(b);
        part.len() == self.rank_of(f) && self.closure(part) == f
    }

    /// All points lie in the lifted Bergman fan and in the apartment of `b`.
    pub fn apartment_contains(&self, b: ElementSet, points: &[Vec<Rational>]) -> bool {
        self.is_basis(b)
            && points.iter().all(|w| {
                self.level_sets(w).into_iter().all(|(_, s)| self.is_flat(s) && self.basis_adapted_to(b, s))
            })
    }

    /// Bases whose apartment contains all the points, in lexicographic order.
    pub fn common_apartments(&self, points: &[Vec<Rational>]) -> Vec<ElementSet> {
        self.bases().iter().copied().filter(|&b| self.apartment_contains(b, points)).collect()
    }

    /// Extends coordinates on a basis to the apartment: an element outside
    /// the basis gets the minimum over its fundamental circuit, a loop gets
    /// the maximum coordinate.
    pub fn circuit_min_extension(&self, b: ElementSet, coords: &[Rational]) -> Vec<Rational> {
        let top = b.iter().map(|e| coords[e].clone()).max().unwrap_or_else(Rational::zero);
        (0..self.ground_size())
            .map(|i| {
                if b.contains(i) {
                    return coords[i].clone();
                }
                let c = self.fundamental_circuit(b, i).without(i);
                c.iter().map(|e| coords[e].clone()).min().unwrap_or_else(|| top.clone())
            })
            .collect()
    }
}
