//! Convex chains: finite integer combinations of indicator functions of
//! closed rational polyhedra.

mod support;

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{HPolyhedron, LatticeBox, LatticeError, Rational, RationalVector, VPolytope};

pub use support::{
    brianchon_gram, cone_functional, find_strictly_convex, is_convex, is_strictly_convex, support_polytope,
    BranchDecomposition, MultiValuedSupportFunction, SupportNumbers,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("operation needs bounded pieces")]
    UnboundedPiece,
    #[error("box too small: chain takes value {value} at margin point {point:?}")]
    BoxTooSmall { point: Vec<i64>, value: i64 },
    #[error("support numbers are not linear on cone {cone:?}")]
    NotPiecewiseLinear { cone: Vec<usize> },
    #[error("invalid support function: {0}")]
    InvalidSupportFunction(String),
    #[error("fan is not complete")]
    FanNotComplete,
    #[error("no strictly convex support function found on the fan")]
    NoStrictlyConvex,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A closed piece of a chain.
#[derive(Clone, Debug)]
pub enum Piece {
    Polytope(VPolytope),
    Polyhedron(HPolyhedron),
}

impl Piece {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Piece::Polytope(p) => p.ambient_dim(),
            Piece::Polyhedron(h) => h.ambient_dim(),
        }
    }

    pub fn contains(&self, u: &RationalVector) -> bool {
        match self {
            Piece::Polytope(p) => p.contains(u),
            Piece::Polyhedron(h) => h.contains(u),
        }
    }

    pub fn contains_lattice(&self, u: &[i64]) -> bool {
        match self {
            Piece::Polytope(p) => p.contains_lattice(u),
            Piece::Polyhedron(h) => h.contains_lattice(u),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Piece::Polytope(p) => p.is_empty(),
            Piece::Polyhedron(h) => h.is_empty(),
        }
    }

    pub fn as_polytope(&self) -> Option<&VPolytope> {
        match self {
            Piece::Polytope(p) => Some(p),
            Piece::Polyhedron(_) => None,
        }
    }

    fn corner_points(&self) -> Vec<RationalVector> {
        match self {
            Piece::Polytope(p) => p.vertices().to_vec(),
            Piece::Polyhedron(h) => h.vertices(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConvexChain {
    ambient_dim: usize,
    terms: Vec<(i64, Piece)>,
}

impl ConvexChain {
    pub fn zero(ambient_dim: usize) -> Self {
        ConvexChain { ambient_dim, terms: Vec::new() }
    }

    /// `1_{{0}}`, the unit of convolution.
    pub fn identity(ambient_dim: usize) -> Self {
        ConvexChain::indicator(VPolytope::point(RationalVector::zero(ambient_dim)))
    }

    pub fn indicator(p: VPolytope) -> Self {
        ConvexChain { ambient_dim: p.ambient_dim(), terms: vec![(1, Piece::Polytope(p))] }
    }

    pub fn indicator_polyhedron(h: HPolyhedron) -> Self {
        ConvexChain { ambient_dim: h.ambient_dim(), terms: vec![(1, Piece::Polyhedron(h))] }
    }

    pub fn from_terms(ambient_dim: usize, terms: Vec<(i64, Piece)>) -> Result<Self, ChainError> {
        if let Some(p) = terms.iter().find(|(_, p)| p.ambient_dim() != ambient_dim) {
            return Err(ChainError::DimensionMismatch { expected: ambient_dim, found: p.1.ambient_dim() });
        }
        Ok(ConvexChain { ambient_dim, terms })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn terms(&self) -> &[(i64, Piece)] {
        &self.terms
    }

    /// Sum of chains. Panics on mismatched ambient dimensions.
    pub fn add(&self, other: &ConvexChain) -> ConvexChain {
        assert_eq!(self.ambient_dim, other.ambient_dim, "chains live in different spaces");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ConvexChain { ambient_dim: self.ambient_dim, terms }
    }

    pub fn scale(&self, k: i64) -> ConvexChain {
        let terms = if k == 0 {
            Vec::new()
        } else {
            self.terms.iter().map(|(c, p)| (c * k, p.clone())).collect()
        };
        ConvexChain { ambient_dim: self.ambient_dim, terms }
    }

    pub fn neg(&self) -> ConvexChain {
        self.scale(-1)
    }

    pub fn evaluate(&self, u: &RationalVector) -> i64 {
        self.terms.iter().filter(|(_, p)| p.contains(u)).map(|(c, _)| c).sum()
    }

    pub fn evaluate_lattice(&self, u: &[i64]) -> i64 {
        self.terms.iter().filter(|(_, p)| p.contains_lattice(u)).map(|(c, _)| c).sum()
    }

    /// Sum of coefficients over nonempty pieces.
    pub fn degree(&self) -> i64 {
        self.terms.iter().filter(|(_, p)| !p.is_empty()).map(|(c, _)| c).sum()
    }

    /// Merges polytope terms with equal vertex sets and drops zero terms.
    pub fn simplify(&self) -> ConvexChain {
        let mut merged: BTreeMap<Vec<RationalVector>, (i64, VPolytope)> = BTreeMap::new();
        let mut rest = Vec::new();
        for (c, p) in &self.terms {
            match p {
                Piece::Polytope(q) if !q.is_empty() => {
                    merged.entry(q.vertices().to_vec()).or_insert((0, q.clone())).0 += c;
                }
                Piece::Polytope(_) => {}
                Piece::Polyhedron(_) => rest.push((*c, p.clone())),
            }
        }
        let mut terms: Vec<(i64, Piece)> =
            merged.into_values().filter(|(c, _)| *c != 0).map(|(c, p)| (c, Piece::Polytope(p))).collect();
        terms.extend(rest);
        ConvexChain { ambient_dim: self.ambient_dim, terms }
    }

    fn polytopes(&self) -> Result<Vec<(i64, &VPolytope)>, ChainError> {
        self.terms
            .iter()
            .map(|(c, p)| p.as_polytope().map(|q| (*c, q)).ok_or(ChainError::UnboundedPiece))
            .collect()
    }

    /// Bilinear extension of Minkowski addition.
    pub fn convolve(&self, other: &ConvexChain) -> Result<ConvexChain, ChainError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(ChainError::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        let a = self.polytopes()?;
        let b = other.polytopes()?;
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for (ca, pa) in &a {
            for (cb, pb) in &b {
                if pa.is_empty() || pb.is_empty() {
                    continue;
                }
                terms.push((ca * cb, Piece::Polytope(pa.minkowski_sum(pb)?)));
            }
        }
        Ok(ConvexChain { ambient_dim: self.ambient_dim, terms }.simplify())
    }

    /// `Σ coeff · volume(piece)`.
    pub fn integral(&self) -> Result<Rational, ChainError> {
        let mut total = Rational::zero();
        for (c, p) in self.polytopes()? {
            total += p.volume() * Rational::from_integer((c).into());
        }
        Ok(total)
    }

    /// Lattice sum over a box, after checking that the chain vanishes on
    /// the one-unit shell around it.
    pub fn lattice_sum(&self, bx: &LatticeBox) -> Result<i64, ChainError> {
        if bx.dim() != self.ambient_dim {
            return Err(ChainError::DimensionMismatch { expected: self.ambient_dim, found: bx.dim() });
        }
        verify_margin(bx, |u| self.evaluate_lattice(u))?;
        let pts: Vec<Vec<i64>> = bx.points().collect();
        Ok(pts.par_iter().map(|u| self.evaluate_lattice(u)).sum())
    }

    /// Bounding box of all piece vertices (and apexes of pointed unbounded
    /// pieces), padded by one.
    pub fn default_box(&self) -> LatticeBox {
        let pts: Vec<RationalVector> = self.terms.iter().flat_map(|(_, p)| p.corner_points()).collect();
        bounding_box(self.ambient_dim, &pts).pad(1)
    }

    /// Lattice sum over [`ConvexChain::default_box`].
    pub fn lattice_sum_default(&self) -> Result<i64, ChainError> {
        self.lattice_sum(&self.default_box())
    }
}

/// Smallest integer box containing the points; the origin box when empty.
pub fn bounding_box(dim: usize, pts: &[RationalVector]) -> LatticeBox {
    use num_traits::ToPrimitive;
    if pts.is_empty() {
        return LatticeBox::new(vec![0; dim], vec![0; dim]);
    }
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for p in pts {
        for i in 0..dim {
            lo[i] = lo[i].min(p.0[i].floor().to_integer().to_i64().unwrap_or(i64::MIN / 4));
            hi[i] = hi[i].max(p.0[i].ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4));
        }
    }
    LatticeBox::new(lo, hi)
}

/// Errors with the first shell point where `f` is nonzero.
pub fn verify_margin(bx: &LatticeBox, f: impl Fn(&[i64]) -> i64 + Sync) -> Result<(), ChainError> {
    let shell: Vec<Vec<i64>> = bx.shell().collect();
    let bad = shell
        .par_iter()
        .map(|u| (u, f(u)))
        .filter(|(_, v)| *v != 0)
        .min_by(|a, b| a.0.cmp(b.0));
    match bad {
        Some((u, v)) => Err(ChainError::BoxTooSmall { point: u.clone(), value: v }),
        None => Ok(()),
    }
}

/// The inverse of `1_P` in closed-faces form: `Σ_{Δ ⪯ −P} (−1)^{dim Δ} 1_Δ`.
pub fn invert_polytope(p: &VPolytope) -> ConvexChain {
    let q = p.neg();
    let terms = q
        .faces()
        .into_iter()
        .map(|f| (if f.dim % 2 == 0 { 1 } else { -1 }, Piece::Polytope(f.polytope)))
        .collect();
    ConvexChain { ambient_dim: p.ambient_dim(), terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rat, rat_frac};

    fn poly(pts: &[&[i64]]) -> VPolytope {
        let d = pts[0].len();
        VPolytope::hull(d, &pts.iter().map(|p| RationalVector::from_ints(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn evaluate_and_cancel() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let c = ConvexChain::indicator(sq.clone());
        let half = RationalVector::new(vec![rat_frac(1, 2), rat_frac(1, 2)]);
        assert_eq!(c.evaluate(&half), 1);
        assert_eq!(c.add(&c.neg()).evaluate(&half), 0);
        assert_eq!(c.integral().unwrap(), rat(1));
        assert_eq!(c.add(&c.neg()).integral().unwrap(), rat(0));
    }

    #[test]
    fn degrees() {
        let seg = poly(&[&[0], &[1]]);
        assert_eq!(ConvexChain::indicator(seg.clone()).degree(), 1);
        assert_eq!(invert_polytope(&seg).degree(), 1);
        assert_eq!(ConvexChain::zero(1).degree(), 0);
    }

    #[test]
    fn inverse_of_segment() {
        let seg = poly(&[&[0], &[1]]);
        let inv = invert_polytope(&seg);
        assert_eq!(inv.terms().len(), 3);
        // Int([-1, 0]) has no lattice points.
        for x in -3..=3 {
            assert_eq!(inv.evaluate_lattice(&[x]), 0);
        }
        assert_eq!(inv.evaluate(&RationalVector::new(vec![rat_frac(-1, 2)])), -1);
        let prod = ConvexChain::indicator(seg).convolve(&inv).unwrap();
        for x in -3..=3 {
            assert_eq!(prod.evaluate_lattice(&[x]), (x == 0) as i64);
        }
        assert_eq!(inv.lattice_sum_default().unwrap(), 0);
    }

    #[test]
    fn inverse_of_square_integral() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(invert_polytope(&sq).integral().unwrap(), rat(1));
    }

    #[test]
    fn segment_convolution_and_sums() {
        let seg = ConvexChain::indicator(poly(&[&[0], &[1]]));
        let two = seg.convolve(&seg).unwrap();
        assert_eq!(two.terms().len(), 1);
        assert_eq!(two.terms()[0].1.as_polytope().unwrap().vertices()[1], RationalVector::from_ints(&[2]));
        assert_eq!(ConvexChain::indicator(poly(&[&[0], &[5]])).lattice_sum_default().unwrap(), 6);
        let id = ConvexChain::identity(1);
        assert_eq!(seg.convolve(&id).unwrap().evaluate_lattice(&[1]), 1);
    }

    #[test]
    fn box_margin_is_enforced() {
        let seg = ConvexChain::indicator(poly(&[&[0], &[5]]));
        let err = seg.lattice_sum(&LatticeBox::new(vec![0], vec![4])).unwrap_err();
        assert_eq!(err, ChainError::BoxTooSmall { point: vec![5], value: 1 });
    }

    #[test]
    fn unbounded_operands_rejected() {
        let h = HPolyhedron::universe(1);
        let c = ConvexChain::indicator_polyhedron(h);
        assert_eq!(c.integral(), Err(ChainError::UnboundedPiece));
        assert!(matches!(c.convolve(&c), Err(ChainError::UnboundedPiece)));
    }
}
