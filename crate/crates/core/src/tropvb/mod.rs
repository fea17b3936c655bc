//! Tropical vector bundles on complete toric varieties, given by a fan, a
//! matroid and a diagram whose rows are Bergman points.

mod alpha;
mod pullback;
mod resolution;

use rayon::prelude::*;
use thiserror::Error;

use crate::chains::{verify_margin, ChainError};
use crate::lattice::{arith, Fan, Halfspace, HPolyhedron, LatticeBox, LatticeError, LatticeVector, Rational, RationalVector};
use crate::matroid::{ElementSet, Matroid, MatroidError};

pub use resolution::{SignedMultiset, SplitBundle, SplitResolution, SplitSummand};

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error("fan is not complete")]
    FanNotComplete,
    #[error("diagram row {} has {found} entries, expected {expected}", .row + 1)]
    RaggedDiagram { row: usize, expected: usize, found: usize },
    #[error("diagram is {rows}x{cols} but the fan has {rays} rays and the matroid {ground} elements")]
    ShapeMismatch { rows: usize, cols: usize, rays: usize, ground: usize },
    #[error("row of ray {} {row:?} is not in the lifted Bergman fan: level set {level_set} is not a flat", .ray + 1)]
    RowNotInBergman { ray: usize, row: Vec<i64>, level_set: ElementSet },
    #[error("rows of cone {:?} lie in no common apartment", one_based(.cone))]
    NoCommonApartment { cone: Vec<usize> },
    #[error("cone {:?} is not smooth", one_based(.cone))]
    NotSmooth { cone: Vec<usize> },
    #[error("cone {:?} is not maximal", one_based(.cone))]
    NotMaximal { cone: Vec<usize> },
    #[error("{0} needs a fan without lineality")]
    NotPointed(&'static str),
    #[error("bound {f} on ray {} is below the largest non-loop entry {needed}", .ray + 1)]
    InvalidBound { ray: usize, f: i64, needed: i64 },
    #[error("bound vector has {found} entries, expected {expected}")]
    BoundLength { expected: usize, found: usize },
    #[error("fan is not a refinement of the bundle's fan")]
    NotARefinement,
    #[error("pulled-back row for ray {} is not integral", .ray + 1)]
    NonIntegralPullback { ray: usize },
    #[error("character on cone {:?} is not integral", one_based(.cone))]
    NonIntegralCharacter { cone: Vec<usize> },
    #[error("Euler characteristic {chi} and chain value {alpha} differ at {u:?}")]
    MainTheoremViolation { u: Vec<i64>, chi: i64, alpha: i64 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// Integer matrix with one row per ray and one column per ground element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    cols: usize,
    rows: Vec<Vec<i64>>,
}

impl Diagram {
    pub fn new(cols: usize, rows: Vec<Vec<i64>>) -> Result<Diagram, BundleError> {
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(BundleError::RaggedDiagram { row, expected: cols, found: r.len() });
        }
        Ok(Diagram { cols, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn row(&self, ray: usize) -> &[i64] {
        &self.rows[ray]
    }

    pub fn entry(&self, ray: usize, e: usize) -> i64 {
        self.rows[ray][e]
    }

    pub fn row_rational(&self, ray: usize) -> Vec<Rational> {
        arith::lift_i64(&self.rows[ray])
    }
}

/// A validated tropical vector bundle. Cones are those of the fan; every
/// cone carries the lexicographically smallest basis whose apartment holds
/// the rows of its rays.
#[derive(Clone, Debug)]
pub struct TropicalVectorBundle {
    fan: Fan,
    matroid: Matroid,
    diagram: Diagram,
    // Per ray: (value, level set) with values decreasing.
    levels: Vec<Vec<(i64, ElementSet)>>,
    loops: ElementSet,
    bases: Vec<ElementSet>,
}

impl TropicalVectorBundle {
    /// Checks completeness, shape, Bergman membership of rows and the
    /// common-apartment condition on every cone.
    pub fn new(fan: Fan, matroid: Matroid, diagram: Diagram) -> Result<Self, BundleError> {
        if !fan.is_complete() {
            return Err(BundleError::FanNotComplete);
        }
        if diagram.n_rows() != fan.rays().len() || diagram.n_cols() != matroid.ground_size() {
            return Err(BundleError::ShapeMismatch {
                rows: diagram.n_rows(),
                cols: diagram.n_cols(),
                rays: fan.rays().len(),
                ground: matroid.ground_size(),
            });
        }
        let rows: Vec<Vec<Rational>> = (0..diagram.n_rows()).map(|r| diagram.row_rational(r)).collect();
        for (ray, w) in rows.iter().enumerate() {
            if let Some(level_set) = matroid.non_flat_level(w) {
                return Err(BundleError::RowNotInBergman { ray, row: diagram.row(ray).to_vec(), level_set });
            }
        }
        let mut bases = Vec::with_capacity(fan.cones().len());
        for c in fan.cones() {
            let pts: Vec<Vec<Rational>> = c.rays.iter().map(|&r| rows[r].clone()).collect();
            let b = matroid
                .bases()
                .iter()
                .copied()
                .find(|&b| matroid.apartment_contains(b, &pts))
                .ok_or_else(|| BundleError::NoCommonApartment { cone: c.rays.clone() })?;
            bases.push(b);
        }
        let levels = (0..diagram.n_rows())
            .map(|r| {
                let mut vals = diagram.row(r).to_vec();
                vals.sort_unstable_by(|a, b| b.cmp(a));
                vals.dedup();
                vals.into_iter()
                    .map(|k| {
                        let s = (0..diagram.n_cols()).filter(|&e| diagram.entry(r, e) >= k).collect::<Vec<_>>();
                        (k, ElementSet::from_elements(&s))
                    })
                    .collect()
            })
            .collect();
        let loops = matroid.loops();
        Ok(TropicalVectorBundle { fan, matroid, diagram, levels, loops, bases })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.matroid.rank()
    }

    /// Adapted basis recorded for cone `i` of the fan.
    pub fn adapted_basis(&self, cone: usize) -> ElementSet {
        self.bases[cone]
    }

    pub fn adapted_bases(&self) -> &[ElementSet] {
        &self.bases
    }

    /// One basis serves every cone.
    pub fn is_split(&self) -> bool {
        self.matroid.bases().iter().any(|&b| {
            self.fan.cones().iter().all(|c| {
                let pts: Vec<Vec<Rational>> = c.rays.iter().map(|&r| self.diagram.row_rational(r)).collect();
                self.matroid.apartment_contains(b, &pts)
            })
        })
    }

    /// `F^ρ_i = closure{e : D[ρ,e] ≥ i}`.
    pub fn klyachko_flat(&self, ray: usize, i: i64) -> ElementSet {
        let mut out = self.loops;
        for &(k, s) in &self.levels[ray] {
            if k < i {
                break;
            }
            out = s;
        }
        out
    }

    /// `⟨u, v_ρ⟩` for every ray.
    pub fn pairings(&self, u: &[i64]) -> Vec<i64> {
        self.fan.rays().iter().map(|v| arith::dot_i64(&v.0, u) as i64).collect()
    }

    fn ray_flats(&self, u: &[i64]) -> Vec<ElementSet> {
        self.pairings(u).iter().enumerate().map(|(r, &p)| self.klyachko_flat(r, p)).collect()
    }

    fn cone_flat(&self, flats: &[ElementSet], cone: usize) -> ElementSet {
        self.fan.cone(cone).rays.iter().fold(self.matroid.ground(), |acc, &r| acc.intersection(flats[r]))
    }

    /// `∩_{ρ ∈ σ(1)} F^ρ_{⟨u, v_ρ⟩}`.
    pub fn section_flat(&self, cone: usize, u: &[i64]) -> ElementSet {
        self.cone_flat(&self.ray_flats(u), cone)
    }

    pub fn h0_local(&self, cone: usize, u: &[i64]) -> usize {
        self.matroid.rank_of(self.section_flat(cone, u))
    }

    /// Intersection of the flats of all rays.
    pub fn global_section_flat(&self, u: &[i64]) -> ElementSet {
        self.ray_flats(u).into_iter().fold(self.matroid.ground(), |a, f| a.intersection(f))
    }

    /// Elements `e` with `u ∈ P_e`.
    pub fn parliament_members(&self, u: &[i64]) -> ElementSet {
        let p = self.pairings(u);
        let members: Vec<usize> =
            (0..self.matroid.ground_size()).filter(|&e| p.iter().enumerate().all(|(r, &x)| x <= self.diagram.entry(r, e))).collect();
        ElementSet::from_elements(&members)
    }

    /// `rank{e : u ∈ P_e}`.
    pub fn h0_global(&self, u: &[i64]) -> usize {
        self.matroid.rank_of(self.parliament_members(u))
    }

    fn element_polyhedron(&self, e: usize, rays: &[usize]) -> HPolyhedron {
        let ineqs = rays
            .iter()
            .map(|&r| Halfspace::new(self.fan.ray(r).clone(), arith::rat(self.diagram.entry(r, e))))
            .collect();
        HPolyhedron::from_inequalities(self.fan.ambient_dim(), ineqs).expect("dimensions agree")
    }

    /// `P_e = {u : ⟨u, v_ρ⟩ ≤ D[ρ,e] for all ρ}`.
    pub fn parliament_polytope(&self, e: usize) -> HPolyhedron {
        let all: Vec<usize> = (0..self.fan.rays().len()).collect();
        self.element_polyhedron(e, &all)
    }

    pub fn parliament(&self) -> Vec<HPolyhedron> {
        (0..self.matroid.ground_size()).map(|e| self.parliament_polytope(e)).collect()
    }

    /// `P_{e,σ}`: only the inequalities of the rays of `σ`.
    pub fn local_parliament(&self, e: usize, cone: usize) -> HPolyhedron {
        self.element_polyhedron(e, &self.fan.cone(cone).rays)
    }

    /// `χ_u = Σ_σ (−1)^{codim σ} h⁰(U_σ)_u` over all cones, the zero cone
    /// included.
    pub fn euler_char_u(&self, u: &[i64]) -> i64 {
        self.euler_char_by_codim(u).iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x } else { -x }).sum()
    }

    /// Unsigned sums of local ranks, indexed by codimension.
    pub fn euler_char_by_codim(&self, u: &[i64]) -> Vec<i64> {
        let flats = self.ray_flats(u);
        let top = self.fan.ambient_dim() - self.fan.lineality_dim();
        let mut out = vec![0i64; top + 1];
        for i in 0..self.fan.cones().len() {
            out[self.fan.codim(i)] += self.matroid.rank_of(self.cone_flat(&flats, i)) as i64;
        }
        out
    }

    /// Box around every parliament vertex and every apex of `P_{e,σ}` for
    /// maximal `σ`, padded by one.
    pub fn default_box(&self) -> Result<LatticeBox, BundleError> {
        if self.fan.lineality_dim() > 0 {
            return Err(BundleError::NotPointed("the default box"));
        }
        let mut pts: Vec<RationalVector> = Vec::new();
        for e in 0..self.matroid.ground_size() {
            let p = self.parliament_polytope(e).vertex_enumeration()?;
            pts.extend(p.vertices().iter().cloned());
            for &m in self.fan.maximal_cones() {
                pts.extend(self.local_parliament(e, m).vertices());
            }
        }
        Ok(crate::chains::bounding_box(self.fan.ambient_dim(), &pts).pad(1))
    }

    /// `Σ_u χ_u` over the box, after checking that `χ` vanishes on its shell.
    pub fn euler_char_total_on(&self, bx: &LatticeBox) -> Result<i64, BundleError> {
        verify_margin(bx, |u| self.euler_char_u(u))?;
        let pts: Vec<Vec<i64>> = bx.points().collect();
        Ok(pts.par_iter().map(|u| self.euler_char_u(u)).sum())
    }

    pub fn euler_char_total(&self) -> Result<i64, BundleError> {
        self.euler_char_total_on(&self.default_box()?)
    }

    /// `Σ_u h⁰_u` over the default box; sections vanish outside the
    /// parliament.
    pub fn h0_total(&self) -> Result<i64, BundleError> {
        let bx = self.default_box()?;
        verify_margin(&bx, |u| self.h0_global(u) as i64)?;
        let pts: Vec<Vec<i64>> = bx.points().collect();
        Ok(pts.par_iter().map(|u| self.h0_global(u) as i64).sum())
    }

    fn rays_of(&self, cone: usize) -> Vec<LatticeVector> {
        self.fan.cone_rays(cone)
    }
}
