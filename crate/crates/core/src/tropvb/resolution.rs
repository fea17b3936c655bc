//! Split resolutions `F_0, …, F_n` and the K-class identity.

use std::collections::BTreeMap;

use super::{BundleError, Diagram, TropicalVectorBundle};
use crate::chains::MultiValuedSupportFunction;
use crate::lattice::{Fan, LatticeVector};
use crate::matroid::Matroid;

/// Characters with integer multiplicities; zero entries are never stored.
pub type SignedMultiset = BTreeMap<LatticeVector, i64>;

fn add_to(ms: &mut SignedMultiset, u: &LatticeVector, k: i64) {
    let e = ms.entry(u.clone()).or_insert(0);
    *e += k;
    if *e == 0 {
        ms.remove(u);
    }
}

/// The summand of `F_k` attached to one cone `σ`: for every maximal cone
/// `τ` (in `fan.maximal_cones()` order) the characters `u^σ_{τ,j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSummand {
    pub cone: usize,
    pub characters: Vec<Vec<LatticeVector>>,
}

/// A split bundle given by the character multisets of its summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBundle {
    codim: usize,
    summands: Vec<SplitSummand>,
}

impl SplitBundle {
    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn summands(&self) -> &[SplitSummand] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.iter().map(|s| s.characters.first().map_or(0, Vec::len)).sum()
    }

    /// Sorted characters on the `pos`-th maximal cone.
    pub fn characters_at(&self, pos: usize) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = self.summands.iter().flat_map(|s| s.characters[pos].iter().cloned()).collect();
        out.sort();
        out
    }

    pub fn multiset_at(&self, pos: usize) -> SignedMultiset {
        let mut ms = SignedMultiset::new();
        for u in self.characters_at(pos) {
            add_to(&mut ms, &u, 1);
        }
        ms
    }

    /// Every line bundle summand agrees on the rays shared by two maximal
    /// cones.
    pub fn is_compatible(&self, fan: &Fan) -> bool {
        let maxes = fan.maximal_cones();
        self.summands.iter().all(|s| {
            (0..maxes.len()).all(|a| {
                (a + 1..maxes.len()).all(|b| {
                    let shared: Vec<usize> =
                        fan.cone(maxes[a]).rays.iter().copied().filter(|r| fan.cone(maxes[b]).rays.contains(r)).collect();
                    s.characters[a].iter().zip(&s.characters[b]).all(|(ua, ub)| {
                        shared.iter().all(|&r| ua.pairing(fan.ray(r)) == ub.pairing(fan.ray(r)))
                    })
                })
            })
        })
    }

    pub fn support_function(&self, fan: &Fan) -> Result<MultiValuedSupportFunction, BundleError> {
        let branches = (0..fan.maximal_cones().len()).map(|p| self.characters_at(p)).collect();
        Ok(MultiValuedSupportFunction::new(fan.clone(), branches)?)
    }

    /// The bundle on the free matroid with one element per line bundle,
    /// whose diagram lists `⟨u, v_ρ⟩` for every summand character.
    pub fn to_bundle(&self, fan: &Fan) -> Result<TropicalVectorBundle, BundleError> {
        let n = self.rank();
        let maxes = fan.maximal_cones();
        let mut rows = Vec::with_capacity(fan.rays().len());
        for (r, v) in fan.rays().iter().enumerate() {
            let pos = maxes
                .iter()
                .position(|&m| fan.cone(m).rays.contains(&r))
                .ok_or(BundleError::FanNotComplete)?;
            rows.push(self.summands.iter().flat_map(|s| s.characters[pos].iter().map(|u| u.pairing(v))).collect());
        }
        TropicalVectorBundle::new(fan.clone(), Matroid::uniform(n, n)?, Diagram::new(n, rows)?)
    }
}

/// `F_0, …, F_n` for a bound vector `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResolution {
    bound: Vec<i64>,
    parts: Vec<SplitBundle>,
}

impl SplitResolution {
    pub fn bound(&self) -> &[i64] {
        &self.bound
    }

    pub fn parts(&self) -> &[SplitBundle] {
        &self.parts
    }

    /// `Σ_k (−1)^k u_{F_k}(τ)` on the `pos`-th maximal cone.
    pub fn alternating_multiset(&self, pos: usize) -> SignedMultiset {
        let mut ms = SignedMultiset::new();
        for (k, part) in self.parts.iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            for u in part.characters_at(pos) {
                add_to(&mut ms, &u, sign);
            }
        }
        ms
    }
}

impl TropicalVectorBundle {
    /// Per ray, the largest entry of a non-loop column: the least `f` with
    /// `F^ρ_i` equal to the loops for all `i > f`.
    pub fn minimal_bound(&self) -> Vec<i64> {
        (0..self.diagram.n_rows())
            .map(|r| {
                let row = self.diagram.row(r);
                let nonloop = (0..row.len()).filter(|&e| !self.loops.contains(e)).map(|e| row[e]).max();
                nonloop.or_else(|| row.iter().copied().max()).unwrap_or(0)
            })
            .collect()
    }

    /// Per ray, the largest entry of the row.
    pub fn default_bound(&self) -> Vec<i64> {
        (0..self.diagram.n_rows()).map(|r| self.diagram.row(r).iter().copied().max().unwrap_or(0)).collect()
    }

    /// Split resolution for a bound `f` with `F^ρ_i` trivial above `f_ρ`.
    pub fn split_resolution(&self, f: &[i64]) -> Result<SplitResolution, BundleError> {
        self.check_bound_len(f)?;
        for (ray, (&fr, needed)) in f.iter().zip(self.minimal_bound()).enumerate() {
            if fr < needed {
                return Err(BundleError::InvalidBound { ray, f: fr, needed });
            }
        }
        self.split_resolution_unchecked(f)
    }

    pub fn split_resolution_default(&self) -> Result<SplitResolution, BundleError> {
        self.split_resolution(&self.default_bound())
    }

    /// The same construction without the bound check.
    pub fn split_resolution_unchecked(&self, f: &[i64]) -> Result<SplitResolution, BundleError> {
        self.check_bound_len(f)?;
        let maxes = self.fan.maximal_cones().to_vec();
        for &m in &maxes {
            self.check_character_cone(m)?;
        }
        let n = self.fan.ambient_dim();
        let mut parts: Vec<SplitBundle> = (0..=n).map(|codim| SplitBundle { codim, summands: Vec::new() }).collect();
        for (sigma, c) in self.fan.cones().iter().enumerate() {
            let basis = self.bases[sigma].elements();
            let mut characters = Vec::with_capacity(maxes.len());
            for &tau in &maxes {
                let tau_rays = &self.fan.cone(tau).rays;
                let chars = basis
                    .iter()
                    .map(|&b| {
                        let vals: Vec<i64> = tau_rays
                            .iter()
                            .map(|&r| if c.rays.contains(&r) { self.diagram.entry(r, b) } else { f[r] })
                            .collect();
                        self.solve_on_cone(tau, &vals)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                characters.push(chars);
            }
            parts[self.fan.codim(sigma)].summands.push(SplitSummand { cone: sigma, characters });
        }
        Ok(SplitResolution { bound: f.to_vec(), parts })
    }

    fn check_bound_len(&self, f: &[i64]) -> Result<(), BundleError> {
        if f.len() != self.fan.rays().len() {
            return Err(BundleError::BoundLength { expected: self.fan.rays().len(), found: f.len() });
        }
        Ok(())
    }

    /// `u_E(τ)` as a multiset for every maximal cone.
    pub fn k_class(&self) -> Result<Vec<SignedMultiset>, BundleError> {
        Ok(self
            .all_characters()?
            .into_iter()
            .map(|cs| {
                let mut ms = SignedMultiset::new();
                for u in &cs {
                    add_to(&mut ms, u, 1);
                }
                ms
            })
            .collect())
    }

    /// `u_E(τ) − Σ_k (−1)^k u_{F_k}(τ)` for every maximal cone.
    pub fn k_class_defect(&self, res: &SplitResolution) -> Result<Vec<SignedMultiset>, BundleError> {
        let mut out = self.k_class()?;
        for (pos, ms) in out.iter_mut().enumerate() {
            for (u, k) in res.alternating_multiset(pos) {
                add_to(ms, &u, -k);
            }
        }
        Ok(out)
    }

    pub fn k_class_identity(&self, res: &SplitResolution) -> Result<bool, BundleError> {
        Ok(self.k_class_defect(res)?.iter().all(|m| m.is_empty()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn lvs(v: &[[i64; 2]]) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = v.iter().map(|x| LatticeVector(x.to_vec())).collect();
        out.sort();
        out
    }

    #[test]
    fn u23_resolution_with_zero_bound() {
        let e = catalog::u23_bundle();
        assert!(matches!(e.split_resolution(&[0, 0, 0]), Err(BundleError::InvalidBound { ray: 0, f: 0, needed: 1 })));
        let res = e.split_resolution_unchecked(&[0, 0, 0]).unwrap();
        let pos = e.fan().maximal_cones().iter().position(|&m| e.fan().cone(m).rays == [0, 1]).unwrap();
        assert_eq!(res.parts()[0].characters_at(pos), lvs(&[[1, 0], [1, 0], [0, 1], [0, 1], [0, 0], [0, 0]]));
        assert_eq!(res.parts()[1].characters_at(pos), lvs(&[[1, 0], [0, 1], [0, 0], [0, 0], [0, 0], [0, 0]]));
        for p in 0..3 {
            assert_eq!(res.parts()[2].characters_at(p), lvs(&[[0, 0], [0, 0]]));
        }
        assert!(e.k_class_identity(&res).unwrap());
        for part in res.parts() {
            assert!(part.is_compatible(e.fan()));
        }
    }

    #[test]
    fn default_bound_identity_and_euler() {
        let fano = catalog::fano_bundle();
        assert!(fano.k_class_identity(&fano.split_resolution_default().unwrap()).unwrap());
        for e in [catalog::u23_bundle(), catalog::line_bundle_p1(2)] {
            let res = e.split_resolution_default().unwrap();
            assert!(e.k_class_identity(&res).unwrap());
            let mut alt = 0;
            for (k, part) in res.parts().iter().enumerate() {
                assert!(part.is_compatible(e.fan()));
                let chi = part.to_bundle(e.fan()).unwrap().euler_char_total().unwrap();
                alt += if k % 2 == 0 { chi } else { -chi };
            }
            assert_eq!(alt, e.euler_char_total().unwrap());
        }
    }

    #[test]
    fn trivial_bundle_identity() {
        let e = catalog::trivial_bundle(catalog::p2_fan(), 2);
        let res = e.split_resolution_default().unwrap();
        assert!(e.k_class_identity(&res).unwrap());
    }
}
