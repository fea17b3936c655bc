//! Characters on smooth maximal cones, the multi-valued support function
//! and the convex chain `α_E`.

use rayon::prelude::*;

use super::{BundleError, TropicalVectorBundle};
use crate::chains::{verify_margin, BranchDecomposition, ConvexChain, MultiValuedSupportFunction};
use crate::lattice::{arith, LatticeBox, LatticeVector, Rational};

impl TropicalVectorBundle {
    /// Solves `⟨u, v_ρ⟩ = values[ρ]` over the rays of a smooth maximal cone.
    pub(crate) fn solve_on_cone(&self, cone: usize, values: &[i64]) -> Result<LatticeVector, BundleError> {
        let rays = self.rays_of(cone);
        let rows: Vec<Vec<Rational>> = rays.iter().map(|v| arith::lift_i64(&v.0)).collect();
        let rhs = arith::lift_i64(values);
        let sol = arith::solve_unique(&rows, &rhs, self.fan.ambient_dim())
            .ok_or_else(|| BundleError::NotSmooth { cone: self.fan.cone(cone).rays.clone() })?;
        crate::lattice::RationalVector(sol)
            .to_lattice()
            .ok_or_else(|| BundleError::NonIntegralCharacter { cone: self.fan.cone(cone).rays.clone() })
    }

    pub(crate) fn check_character_cone(&self, cone: usize) -> Result<(), BundleError> {
        if self.fan.lineality_dim() > 0 {
            return Err(BundleError::NotPointed("characters"));
        }
        let rays = self.fan.cone(cone).rays.clone();
        if !self.fan.maximal_cones().contains(&cone) {
            return Err(BundleError::NotMaximal { cone: rays });
        }
        if !self.fan.is_cone_smooth(cone) {
            return Err(BundleError::NotSmooth { cone: rays });
        }
        Ok(())
    }

    /// `u(σ)`: for each element `b` of the adapted basis, in increasing
    /// order, the character with `⟨u_b, v_ρ⟩ = D[ρ, b]` on `σ(1)`.
    pub fn characters(&self, cone: usize) -> Result<Vec<LatticeVector>, BundleError> {
        self.check_character_cone(cone)?;
        let rays = &self.fan.cone(cone).rays;
        self.bases[cone]
            .iter()
            .map(|b| {
                let vals: Vec<i64> = rays.iter().map(|&r| self.diagram.entry(r, b)).collect();
                self.solve_on_cone(cone, &vals)
            })
            .collect()
    }

    /// Characters of every maximal cone, aligned with `fan.maximal_cones()`.
    pub fn all_characters(&self) -> Result<Vec<Vec<LatticeVector>>, BundleError> {
        self.fan.maximal_cones().iter().map(|&m| self.characters(m)).collect()
    }

    /// `h⁰(U_σ)_u = #{i : u_{σ,i} − u ∈ σ^∨}` on a smooth maximal cone.
    pub fn h0_local_from_characters(&self, cone: usize, u: &[i64]) -> Result<usize, BundleError> {
        let chars = self.characters(cone)?;
        let rays = self.rays_of(cone);
        Ok(chars
            .iter()
            .filter(|c| rays.iter().all(|v| arith::dot_i64(&v.0, &c.0) >= arith::dot_i64(&v.0, u)))
            .count())
    }

    pub fn support_function(&self) -> Result<MultiValuedSupportFunction, BundleError> {
        Ok(MultiValuedSupportFunction::new(self.fan.clone(), self.all_characters()?)?)
    }

    /// One-valued branches of the support function on the refinement by
    /// the character difference hyperplanes.
    pub fn branch_decomposition(&self) -> Result<BranchDecomposition, BundleError> {
        Ok(self.support_function()?.decompose(&[])?)
    }

    /// `α_E = Σ_i BG(𝔥_i)` over the one-valued branches.
    pub fn chain_alpha(&self) -> Result<ConvexChain, BundleError> {
        Ok(self.branch_decomposition()?.chain()?)
    }

    /// Errors at the first lattice point of the box or its shell where
    /// `χ_u ≠ α(u)`.
    pub fn verify_alpha_on(&self, alpha: &ConvexChain, bx: &LatticeBox) -> Result<(), BundleError> {
        let diff = |u: &[i64]| self.euler_char_u(u) - alpha.evaluate_lattice(u);
        if let Err(crate::chains::ChainError::BoxTooSmall { point, .. }) = verify_margin(bx, diff) {
            return Err(self.violation(alpha, point));
        }
        let pts: Vec<Vec<i64>> = bx.points().collect();
        match pts.par_iter().find_first(|u| diff(u) != 0) {
            Some(u) => Err(self.violation(alpha, u.clone())),
            None => Ok(()),
        }
    }

    fn violation(&self, alpha: &ConvexChain, u: Vec<i64>) -> BundleError {
        BundleError::MainTheoremViolation { chi: self.euler_char_u(&u), alpha: alpha.evaluate_lattice(&u), u }
    }

    /// `α_E`, checked against `χ` on the default box.
    pub fn chain_alpha_verified(&self) -> Result<ConvexChain, BundleError> {
        let alpha = self.chain_alpha()?;
        self.verify_alpha_on(&alpha, &self.default_box()?)?;
        Ok(alpha)
    }
}

#[cfg(test)]
mod tests {
    use crate::catalog;
    use crate::chains::brianchon_gram;
    use crate::lattice::{LatticeBox, LatticeVector};

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    #[test]
    fn u23_characters() {
        let e = catalog::u23_bundle();
        let s12 = e.fan().cone_index(&[0, 1]).unwrap();
        let s23 = e.fan().cone_index(&[1, 2]).unwrap();
        let s13 = e.fan().cone_index(&[0, 2]).unwrap();
        assert_eq!(e.characters(s12).unwrap(), vec![lv(&[1, 0]), lv(&[0, 1])]);
        let mut c = e.characters(s23).unwrap();
        c.sort();
        assert_eq!(c, vec![lv(&[-1, 0]), lv(&[-1, 1])]);
        let mut c = e.characters(s13).unwrap();
        c.sort();
        assert_eq!(c, vec![lv(&[0, -1]), lv(&[1, -1])]);
        assert!(e.characters(0).is_err());
    }

    #[test]
    fn fano_characters() {
        let e = catalog::fano_bundle();
        let s3 = e.fan().cone_index(&[0, 1]).unwrap();
        let mut c = e.characters(s3).unwrap();
        c.sort();
        assert_eq!(c, vec![lv(&[0, 2]), lv(&[1, 1]), lv(&[2, 0])]);
    }

    #[test]
    fn fano_alpha_total() {
        let e = catalog::fano_bundle();
        let alpha = e.chain_alpha_verified().unwrap();
        assert_eq!(alpha.lattice_sum(&e.default_box().unwrap()).unwrap(), 27);
    }

    #[test]
    fn rank_one_alpha_is_bg() {
        let e = catalog::line_bundle_p1(3);
        let alpha = e.chain_alpha().unwrap();
        let bg = brianchon_gram(e.fan(), &crate::chains::SupportNumbers::from_ints(&[3, 0])).unwrap();
        for u in LatticeBox::cube(1, 6).points() {
            assert_eq!(alpha.evaluate_lattice(&u), bg.evaluate_lattice(&u));
        }
    }

    #[test]
    fn trivial_characters_vanish() {
        let e = catalog::trivial_bundle(catalog::p1xp1_fan(), 2);
        for cs in e.all_characters().unwrap() {
            assert!(cs.iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn section_formulas_agree() {
        for e in [catalog::fano_bundle(), catalog::u23_bundle()] {
            for &m in e.fan().maximal_cones() {
                for u in LatticeBox::cube(2, 3).points() {
                    assert_eq!(e.h0_local(m, &u), e.h0_local_from_characters(m, &u).unwrap());
                }
            }
        }
    }
}
