//! Rational polyhedral cones with both descriptions cached.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::arith::{self, Rational};
use super::dd::cone_generators;
use super::{LatticeError, LatticeVector, RationalVector, MAX_VERTEX_DIM};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    ambient_dim: usize,
    dim: usize,
    rays: Vec<LatticeVector>,
    lineality: Vec<LatticeVector>,
    /// Inward normals `u` with `u·x >= 0` on the cone.
    facets: Vec<LatticeVector>,
    /// Normals `u` with `u·x = 0` on the cone.
    equations: Vec<LatticeVector>,
}

fn to_big(v: &LatticeVector) -> Vec<BigInt> {
    v.0.iter().map(|&x| BigInt::from(x)).collect()
}

fn from_big(v: &[BigInt]) -> Result<LatticeVector, LatticeError> {
    arith::to_i64_vec(v).map(LatticeVector).ok_or(LatticeError::Overflow)
}

fn check_dims(ambient_dim: usize, vs: &[LatticeVector]) -> Result<(), LatticeError> {
    for v in vs {
        if v.dim() != ambient_dim {
            return Err(LatticeError::DimensionMismatch { expected: ambient_dim, found: v.dim() });
        }
    }
    Ok(())
}

impl Cone {
    /// Cone generated by `rays`; non-extreme and parallel generators are dropped.
    pub fn new(ambient_dim: usize, rays: &[LatticeVector]) -> Result<Cone, LatticeError> {
        Cone::from_generators(ambient_dim, rays, &[])
    }

    /// Cone `cone(rays) + span(lineality)`, normalized to extreme rays modulo
    /// the lineality space.
    pub fn from_generators(
        ambient_dim: usize,
        rays: &[LatticeVector],
        lineality: &[LatticeVector],
    ) -> Result<Cone, LatticeError> {
        check_dims(ambient_dim, rays)?;
        check_dims(ambient_dim, lineality)?;
        let mut cons: Vec<Vec<BigInt>> = rays.iter().filter(|r| !r.is_zero()).map(to_big).collect();
        for l in lineality.iter().filter(|l| !l.is_zero()) {
            let b = to_big(l);
            cons.push(b.iter().map(|x| -x).collect());
            cons.push(b);
        }
        let dual = cone_generators(&cons, ambient_dim);
        let facets = dual.rays.iter().map(|r| from_big(r)).collect::<Result<Vec<_>, _>>()?;
        let equations = dual.lineality.iter().map(|r| from_big(r)).collect::<Result<Vec<_>, _>>()?;
        Cone::from_inequalities(ambient_dim, facets, equations)
    }

    /// Cone `{x : f·x >= 0, e·x = 0}`.
    pub fn from_inequalities(
        ambient_dim: usize,
        facets: Vec<LatticeVector>,
        equations: Vec<LatticeVector>,
    ) -> Result<Cone, LatticeError> {
        check_dims(ambient_dim, &facets)?;
        check_dims(ambient_dim, &equations)?;
        let mut cons: Vec<Vec<BigInt>> = facets.iter().map(to_big).collect();
        for e in &equations {
            let b = to_big(e);
            cons.push(b.iter().map(|x| -x).collect());
            cons.push(b);
        }
        let gens = cone_generators(&cons, ambient_dim);
        let mut rays = gens.rays.iter().map(|r| from_big(r)).collect::<Result<Vec<_>, _>>()?;
        rays.sort();
        rays.dedup();
        let lineality = gens.lineality.iter().map(|r| from_big(r)).collect::<Result<Vec<_>, _>>()?;
        let mut span: Vec<Vec<i64>> = rays.iter().map(|r| r.0.clone()).collect();
        span.extend(lineality.iter().map(|r| r.0.clone()));
        let dim = if span.is_empty() { 0 } else { arith::rank_i64(&span) };
        let mut cone = Cone { ambient_dim, dim, rays, lineality, facets, equations };
        cone.reduce_facets();
        Ok(cone)
    }

    /// Drops inequality normals that are implied or are actually equations.
    fn reduce_facets(&mut self) {
        if !self.lineality.is_empty() {
            return;
        }
        let mut keep: Vec<LatticeVector> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            let tight: Vec<usize> = (0..self.rays.len()).filter(|&i| f.pairing(&self.rays[i]) == 0).collect();
            if tight.len() == self.rays.len() {
                continue;
            }
            let rows: Vec<Vec<i64>> = tight.iter().map(|&i| self.rays[i].0.clone()).collect();
            let r = if rows.is_empty() { 0 } else { arith::rank_i64(&rows) };
            if r + 1 == self.dim && seen.insert(tight) {
                keep.push(f.clone());
            }
        }
        self.facets = keep;
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.facets.iter().all(|f| !x.pairing_lattice(f).is_negative())
            && self.equations.iter().all(|e| x.pairing_lattice(e).is_zero())
    }

    pub fn contains_lattice(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| arith::dot_i64(&f.0, x) >= 0)
            && self.equations.iter().all(|e| arith::dot_i64(&e.0, x) == 0)
    }

    /// Relative interior membership.
    pub fn contains_relint(&self, x: &RationalVector) -> bool {
        self.facets.iter().all(|f| x.pairing_lattice(f).is_positive())
            && self.equations.iter().all(|e| x.pairing_lattice(e).is_zero())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains_lattice(&r.0))
            && other.lineality.iter().all(|l| self.contains_lattice(&l.0) && self.contains_lattice(&l.neg().0))
    }

    /// Dual cone `{u : u·x >= 0 for all x in the cone}`.
    pub fn dual(&self) -> Result<Cone, LatticeError> {
        if self.ambient_dim > MAX_VERTEX_DIM {
            return Err(LatticeError::UnsupportedDimension {
                op: "dual_cone",
                dim: self.ambient_dim,
                max: MAX_VERTEX_DIM,
            });
        }
        Cone::from_inequalities(self.ambient_dim, self.rays.clone(), self.lineality.clone())
    }

    /// A point in the relative interior.
    pub fn interior_point(&self) -> LatticeVector {
        let mut p = LatticeVector::zero(self.ambient_dim);
        for r in &self.rays {
            p = p.add(r);
        }
        p
    }

    /// Ray index sets of all faces of a pointed cone, including the apex and
    /// the cone itself.
    pub fn face_ray_sets(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.rays.len()).collect();
        let tight: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| (0..self.rays.len()).filter(|&i| f.pairing(&self.rays[i]) == 0).collect())
            .collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(all.clone());
        let mut queue = vec![all.into_iter().collect::<BTreeSet<usize>>()];
        while let Some(face) = queue.pop() {
            for t in &tight {
                let next: BTreeSet<usize> = face.intersection(t).copied().collect();
                if next.len() < face.len() && found.insert(next.iter().copied().collect()) {
                    queue.push(next);
                }
            }
        }
        found.insert(Vec::new());
        found.into_iter().collect()
    }

    /// Some `u` with `u·v = values[v]` for every ray `v`, if the values extend
    /// linearly.
    pub fn linear_functional(&self, values: &[Rational]) -> Option<RationalVector> {
        let rows: Vec<Vec<Rational>> = self.rays.iter().map(|r| arith::lift_i64(&r.0)).collect();
        if rows.is_empty() {
            return Some(RationalVector::zero(self.ambient_dim));
        }
        arith::solve_any(&rows, values, self.ambient_dim).map(RationalVector)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    #[test]
    fn orthant_is_self_dual() {
        let c = Cone::new(2, &[lv(&[1, 0]), lv(&[0, 1])]).unwrap();
        let d = c.dual().unwrap();
        assert_eq!(d.rays(), &[lv(&[0, 1]), lv(&[1, 0])]);
        assert!(d.is_pointed());
    }

    #[test]
    fn dual_of_ray_is_halfplane() {
        let c = Cone::new(2, &[lv(&[1, 0])]).unwrap();
        let d = c.dual().unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.lineality().len(), 1);
        assert_eq!(d.rays(), &[lv(&[1, 0])]);
        assert!(d.contains_lattice(&[0, 5]) && d.contains_lattice(&[0, -5]));
        assert!(!d.contains_lattice(&[-1, 0]));
    }

    #[test]
    fn drops_non_extreme_generators() {
        let c = Cone::new(2, &[lv(&[1, 0]), lv(&[1, 1]), lv(&[0, 1]), lv(&[2, 0])]).unwrap();
        assert_eq!(c.rays().len(), 2);
        assert_eq!(c.facets().len(), 2);
    }

    #[test]
    fn faces_of_simplicial_cone() {
        let c = Cone::new(3, &[lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])]).unwrap();
        assert_eq!(c.face_ray_sets().len(), 8);
    }

    #[test]
    fn dimension_cap() {
        let c = Cone::new(5, &[LatticeVector::unit(5, 0)]).unwrap();
        assert!(matches!(c.dual(), Err(LatticeError::UnsupportedDimension { .. })));
    }

    #[test]
    fn zero_cone() {
        let c = Cone::new(2, &[]).unwrap();
        assert_eq!(c.dim(), 0);
        assert!(c.contains_lattice(&[0, 0]));
        assert!(!c.contains_lattice(&[1, 0]));
        assert_eq!(c.dual().unwrap().lineality().len(), 2);
    }
}
