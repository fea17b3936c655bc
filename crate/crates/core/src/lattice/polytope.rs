//! H- and V-described polyhedra: vertex enumeration, hulls, faces, volumes
//! and lattice points.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{self, Rational};
use super::dd::{cone_generators, Generators};
use super::{LatticeError, LatticeVector, RationalVector, MAX_VERTEX_DIM};

/// `⟨y, normal⟩ ≤ bound` (or `=` when used as an equality).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: LatticeVector,
    pub bound: Rational,
}

impl Halfspace {
    pub fn new(normal: LatticeVector, bound: Rational) -> Self {
        Halfspace { normal, bound }
    }
}

/// Polyhedron `{y : ⟨y, n_i⟩ ≤ d_i, ⟨y, e_j⟩ = c_j}`.
#[derive(Clone, Debug)]
pub struct HPolyhedron {
    ambient_dim: usize,
    inequalities: Vec<Halfspace>,
    equalities: Vec<Halfspace>,
    floor_bounds: Vec<i128>,
    eq_bounds: Vec<Option<i128>>,
}

impl PartialEq for HPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.inequalities == other.inequalities
            && self.equalities == other.equalities
    }
}

fn homogenize_row(h: &Halfspace) -> Vec<BigInt> {
    // bound·t − ⟨n, x⟩ ≥ 0, scaled by the denominator of bound.
    let q = h.bound.denom();
    let mut row: Vec<BigInt> = h.normal.0.iter().map(|&x| -(q * BigInt::from(x))).collect();
    row.push(h.bound.numer().clone());
    row
}

fn lv_from_big(v: &[BigInt]) -> Result<LatticeVector, LatticeError> {
    arith::to_i64_vec(v).map(LatticeVector).ok_or(LatticeError::Overflow)
}

impl HPolyhedron {
    pub fn new(
        ambient_dim: usize,
        inequalities: Vec<Halfspace>,
        equalities: Vec<Halfspace>,
    ) -> Result<HPolyhedron, LatticeError> {
        for h in inequalities.iter().chain(&equalities) {
            if h.normal.dim() != ambient_dim {
                return Err(LatticeError::DimensionMismatch { expected: ambient_dim, found: h.normal.dim() });
            }
        }
        let floor_bounds = inequalities.iter().map(|h| arith::floor_i128(&h.bound)).collect();
        let eq_bounds = equalities
            .iter()
            .map(|h| if h.bound.is_integer() { h.bound.to_integer().to_i128() } else { None })
            .collect();
        Ok(HPolyhedron { ambient_dim, inequalities, equalities, floor_bounds, eq_bounds })
    }

    /// Polyhedron with inequalities only.
    pub fn from_inequalities(ambient_dim: usize, inequalities: Vec<Halfspace>) -> Result<HPolyhedron, LatticeError> {
        HPolyhedron::new(ambient_dim, inequalities, Vec::new())
    }

    /// The whole space.
    pub fn universe(ambient_dim: usize) -> HPolyhedron {
        HPolyhedron::new(ambient_dim, Vec::new(), Vec::new()).expect("no constraints")
    }

    /// A system explicitly marked empty (`0 ≤ -1`).
    pub fn empty(ambient_dim: usize) -> HPolyhedron {
        let h = Halfspace::new(LatticeVector::zero(ambient_dim), -Rational::one());
        HPolyhedron::new(ambient_dim, vec![h], Vec::new()).expect("dimensions agree")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn inequalities(&self) -> &[Halfspace] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Halfspace] {
        &self.equalities
    }

    pub fn contains(&self, y: &RationalVector) -> bool {
        self.inequalities.iter().all(|h| y.pairing_lattice(&h.normal) <= h.bound)
            && self.equalities.iter().all(|h| y.pairing_lattice(&h.normal) == h.bound)
    }

    pub fn contains_lattice(&self, y: &[i64]) -> bool {
        self.inequalities
            .iter()
            .zip(&self.floor_bounds)
            .all(|(h, &b)| arith::dot_i64(&h.normal.0, y) <= b)
            && self
                .equalities
                .iter()
                .zip(&self.eq_bounds)
                .all(|(h, b)| b.is_some_and(|b| arith::dot_i64(&h.normal.0, y) == b))
    }

    pub fn translate(&self, t: &RationalVector) -> HPolyhedron {
        let shift = |hs: &[Halfspace]| -> Vec<Halfspace> {
            hs.iter()
                .map(|h| Halfspace::new(h.normal.clone(), &h.bound + t.pairing_lattice(&h.normal)))
                .collect()
        };
        HPolyhedron::new(self.ambient_dim, shift(&self.inequalities), shift(&self.equalities))
            .expect("dimensions agree")
    }

    fn homogenized_constraints(&self) -> Vec<Vec<BigInt>> {
        let d = self.ambient_dim;
        let mut cons: Vec<Vec<BigInt>> = self.inequalities.iter().map(homogenize_row).collect();
        for h in &self.equalities {
            let row = homogenize_row(h);
            cons.push(row.iter().map(|x| -x).collect());
            cons.push(row);
        }
        let mut t = vec![BigInt::zero(); d + 1];
        t[d] = BigInt::one();
        cons.push(t);
        cons
    }

    fn homogenized(&self) -> Generators {
        cone_generators(&self.homogenized_constraints(), self.ambient_dim + 1)
    }

    pub fn is_empty(&self) -> bool {
        let d = self.ambient_dim;
        !self.homogenized().rays.iter().any(|r| r[d].is_positive())
    }

    /// Dimension of the lineality space of a nonempty polyhedron.
    pub fn lineality_dim(&self) -> usize {
        self.homogenized().lineality.len()
    }

    pub fn is_bounded(&self) -> bool {
        let g = self.homogenized();
        let d = self.ambient_dim;
        g.lineality.is_empty() && g.rays.iter().all(|r| r[d].is_positive())
    }

    /// Vertices of the minimal faces when the polyhedron has no lineality.
    pub fn vertices(&self) -> Vec<RationalVector> {
        let g = self.homogenized();
        if !g.lineality.is_empty() {
            return Vec::new();
        }
        let d = self.ambient_dim;
        let mut out: Vec<RationalVector> = g
            .rays
            .iter()
            .filter(|r| r[d].is_positive())
            .map(|r| RationalVector((0..d).map(|i| Rational::new(r[i].clone(), r[d].clone())).collect()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Exact vertex set of a bounded polyhedron.
    pub fn vertex_enumeration(&self) -> Result<VPolytope, LatticeError> {
        if self.ambient_dim > MAX_VERTEX_DIM {
            return Err(LatticeError::UnsupportedDimension {
                op: "vertex_enumeration",
                dim: self.ambient_dim,
                max: MAX_VERTEX_DIM,
            });
        }
        let g = self.homogenized();
        let d = self.ambient_dim;
        let feasible = g.rays.iter().any(|r| r[d].is_positive());
        if !feasible {
            return Ok(VPolytope::empty(d));
        }
        if !g.lineality.is_empty() || g.rays.iter().any(|r| r[d].is_zero()) {
            return Err(LatticeError::Unbounded);
        }
        let pts: Vec<RationalVector> = g
            .rays
            .iter()
            .map(|r| RationalVector((0..d).map(|i| Rational::new(r[i].clone(), r[d].clone())).collect()))
            .collect();
        VPolytope::hull(d, &pts)
    }

    /// Dimensions of all nonempty faces, including the polyhedron itself.
    /// Requires a polyhedron without lineality.
    pub fn face_dims(&self) -> Result<Vec<usize>, LatticeError> {
        let d = self.ambient_dim;
        let cons = self.homogenized_constraints();
        let g = cone_generators(&cons, d + 1);
        if !g.lineality.is_empty() {
            return Err(LatticeError::NotStrictlyConvex(Vec::new()));
        }
        if !g.rays.iter().any(|r| r[d].is_positive()) {
            return Ok(Vec::new());
        }
        let n = g.rays.len();
        let tight: Vec<BTreeSet<usize>> = cons
            .iter()
            .map(|a| (0..n).filter(|&i| arith::dot_big(a, &g.rays[i]).is_zero()).collect())
            .collect();
        let all: BTreeSet<usize> = (0..n).collect();
        let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        found.insert(all.clone());
        let mut queue = vec![all];
        while let Some(f) = queue.pop() {
            for t in &tight {
                let next: BTreeSet<usize> = f.intersection(t).copied().collect();
                if next.len() < f.len() && found.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        let mut dims = Vec::new();
        for f in found {
            if !f.iter().any(|&i| g.rays[i][d].is_positive()) {
                continue;
            }
            let rows: Vec<Vec<Rational>> =
                f.iter().map(|&i| g.rays[i].iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
            dims.push(arith::rank(&rows) - 1);
        }
        Ok(dims)
    }

    /// `Σ_F (−1)^{dim F}` over the nonempty faces.
    pub fn face_euler_sum(&self) -> Result<i64, LatticeError> {
        Ok(self.face_dims()?.iter().map(|&k| if k % 2 == 0 { 1 } else { -1 }).sum())
    }
}

/// Convex hull of finitely many rational points.
#[derive(Clone, Debug)]
pub struct VPolytope {
    ambient_dim: usize,
    vertices: Vec<RationalVector>,
    dim: usize,
    hrep: HPolyhedron,
    facet_vertices: Vec<Vec<usize>>,
}

impl PartialEq for VPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for VPolytope {}

/// A nonempty face of a polytope together with its tangent cone.
#[derive(Clone, Debug)]
pub struct Face {
    /// Indices into the parent's vertex list.
    pub vertex_indices: Vec<usize>,
    pub polytope: VPolytope,
    pub dim: usize,
    pub tangent_cone: HPolyhedron,
}

impl VPolytope {
    pub fn empty(ambient_dim: usize) -> VPolytope {
        VPolytope {
            ambient_dim,
            vertices: Vec::new(),
            dim: 0,
            hrep: HPolyhedron::empty(ambient_dim),
            facet_vertices: Vec::new(),
        }
    }

    pub fn point(p: RationalVector) -> VPolytope {
        let d = p.dim();
        VPolytope::hull(d, &[p]).expect("a point has small coordinates")
    }

    /// Convex hull; non-extreme and repeated points are removed.
    pub fn hull(ambient_dim: usize, points: &[RationalVector]) -> Result<VPolytope, LatticeError> {
        for p in points {
            if p.dim() != ambient_dim {
                return Err(LatticeError::DimensionMismatch { expected: ambient_dim, found: p.dim() });
            }
        }
        let mut pts: Vec<RationalVector> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            return Ok(VPolytope::empty(ambient_dim));
        }
        let d = ambient_dim;
        let rows: Vec<Vec<BigInt>> = pts
            .iter()
            .map(|p| {
                let mut l = BigInt::one();
                for x in &p.0 {
                    l = l.lcm(x.denom());
                }
                let mut row: Vec<BigInt> = p.0.iter().map(|x| (x * &l).to_integer()).collect();
                row.push(l);
                arith::primitive_big(&row)
            })
            .collect();
        let g = cone_generators(&rows, d + 1);

        let mut equalities = Vec::new();
        for l in &g.lineality {
            let normal = lv_from_big(&l[..d])?;
            equalities.push(Halfspace::new(normal, Rational::from_integer(-l[d].clone())));
        }
        let mut facets: Vec<(Halfspace, Vec<usize>)> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for r in &g.rays {
            let tight: Vec<usize> = (0..rows.len()).filter(|&i| arith::dot_big(r, &rows[i]).is_zero()).collect();
            if tight.is_empty() || tight.len() == rows.len() || !seen.insert(tight.clone()) {
                continue;
            }
            let normal = lv_from_big(&r[..d])?.neg();
            facets.push((Halfspace::new(normal, Rational::from_integer(r[d].clone())), tight));
        }

        let eq_rows: Vec<Vec<i64>> = equalities.iter().map(|h| h.normal.0.clone()).collect();
        let dim = d - if eq_rows.is_empty() { 0 } else { arith::rank_i64(&eq_rows) };
        let mut keep = Vec::new();
        for i in 0..pts.len() {
            let mut normals = eq_rows.clone();
            normals.extend(facets.iter().filter(|(_, t)| t.contains(&i)).map(|(h, _)| h.normal.0.clone()));
            let r = if normals.is_empty() { 0 } else { arith::rank_i64(&normals) };
            if r == d {
                keep.push(i);
            }
        }
        let vertices: Vec<RationalVector> = keep.iter().map(|&i| pts[i].clone()).collect();
        let facet_vertices = facets
            .iter()
            .map(|(_, t)| (0..keep.len()).filter(|&j| t.contains(&keep[j])).collect())
            .collect();
        let hrep = HPolyhedron::new(d, facets.into_iter().map(|(h, _)| h).collect(), equalities)?;
        Ok(VPolytope { ambient_dim: d, vertices, dim, hrep, facet_vertices })
    }

    pub fn from_lattice_points(ambient_dim: usize, points: &[LatticeVector]) -> Result<VPolytope, LatticeError> {
        let pts: Vec<RationalVector> = points.iter().map(|p| p.to_rational()).collect();
        VPolytope::hull(ambient_dim, &pts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn hrep(&self) -> &HPolyhedron {
        &self.hrep
    }

    /// Vertex index sets of the facets.
    pub fn facet_vertices(&self) -> &[Vec<usize>] {
        &self.facet_vertices
    }

    pub fn contains(&self, y: &RationalVector) -> bool {
        !self.is_empty() && self.hrep.contains(y)
    }

    pub fn contains_lattice(&self, y: &[i64]) -> bool {
        !self.is_empty() && self.hrep.contains_lattice(y)
    }

    pub fn neg(&self) -> VPolytope {
        let pts: Vec<RationalVector> = self.vertices.iter().map(|v| v.neg()).collect();
        VPolytope::hull(self.ambient_dim, &pts).expect("negation keeps coordinates")
    }

    pub fn translate(&self, t: &RationalVector) -> VPolytope {
        let pts: Vec<RationalVector> = self.vertices.iter().map(|v| v.add(t)).collect();
        VPolytope::hull(self.ambient_dim, &pts).expect("translation keeps dimension")
    }

    pub fn minkowski_sum(&self, other: &VPolytope) -> Result<VPolytope, LatticeError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LatticeError::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.add(b));
            }
        }
        VPolytope::hull(self.ambient_dim, &pts)
    }

    fn affine_dim(&self, idx: &[usize]) -> usize {
        if idx.len() <= 1 {
            return 0;
        }
        let base = &self.vertices[idx[0]];
        let rows: Vec<Vec<Rational>> = idx[1..].iter().map(|&i| self.vertices[i].sub(base).0).collect();
        arith::rank(&rows)
    }

    /// Vertex index sets and dimensions of all nonempty faces.
    pub fn face_sets(&self) -> Vec<(Vec<usize>, usize)> {
        if self.is_empty() {
            return Vec::new();
        }
        let all: BTreeSet<usize> = (0..self.vertices.len()).collect();
        let facets: Vec<BTreeSet<usize>> =
            self.facet_vertices.iter().map(|f| f.iter().copied().collect()).collect();
        let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        found.insert(all.clone());
        let mut queue = vec![all];
        while let Some(f) = queue.pop() {
            for t in &facets {
                let next: BTreeSet<usize> = f.intersection(t).copied().collect();
                if !next.is_empty() && next.len() < f.len() && found.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        let mut out: Vec<(Vec<usize>, usize)> = found
            .into_iter()
            .map(|f| {
                let v: Vec<usize> = f.into_iter().collect();
                let k = self.affine_dim(&v);
                (v, k)
            })
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// Full face lattice with tangent cones.
    pub fn faces(&self) -> Vec<Face> {
        self.face_sets()
            .into_iter()
            .map(|(idx, dim)| {
                let pts: Vec<RationalVector> = idx.iter().map(|&i| self.vertices[i].clone()).collect();
                let polytope = VPolytope::hull(self.ambient_dim, &pts).expect("subset of vertices");
                let ineqs: Vec<Halfspace> = self
                    .facet_vertices
                    .iter()
                    .zip(self.hrep.inequalities())
                    .filter(|(fv, _)| idx.iter().all(|i| fv.contains(i)))
                    .map(|(_, h)| h.clone())
                    .collect();
                let tangent_cone = HPolyhedron::new(self.ambient_dim, ineqs, self.hrep.equalities().to_vec())
                    .expect("dimensions agree");
                Face { vertex_indices: idx, polytope, dim, tangent_cone }
            })
            .collect()
    }

    fn triangulate(
        &self,
        faces: &[(Vec<usize>, usize)],
        face: &[usize],
        dim: usize,
        use_last: bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if dim == 0 {
            out.push(vec![face[0]]);
            return;
        }
        let apex = if use_last { *face.last().expect("nonempty") } else { face[0] };
        for (sub, k) in faces {
            if *k + 1 != dim || sub.contains(&apex) || !sub.iter().all(|i| face.contains(i)) {
                continue;
            }
            let mut part = Vec::new();
            self.triangulate(faces, sub, *k, use_last, &mut part);
            for mut s in part {
                s.push(apex);
                out.push(s);
            }
        }
    }

    /// Simplices (vertex index lists) of a pulling triangulation from either
    /// the first or the last vertex.
    pub fn triangulation(&self, use_last: bool) -> Vec<Vec<usize>> {
        if self.is_empty() {
            return Vec::new();
        }
        let faces = self.face_sets();
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        self.triangulate(&faces, &all, self.dim, use_last, &mut out);
        out
    }

    fn volume_by(&self, use_last: bool) -> Rational {
        let d = self.ambient_dim;
        if self.is_empty() || self.dim < d {
            return Rational::zero();
        }
        if d == 0 {
            return Rational::one();
        }
        let fact = Rational::from_integer(arith::factorial(d));
        let mut total = Rational::zero();
        for s in self.triangulation(use_last) {
            let base = &self.vertices[s[0]];
            let m: Vec<Vec<Rational>> = s[1..].iter().map(|&i| self.vertices[i].sub(base).0).collect();
            total += arith::det_rat(&m).abs();
        }
        total / fact
    }

    /// Euclidean volume in the ambient space; zero for lower-dimensional input.
    pub fn volume(&self) -> Rational {
        self.volume_by(false)
    }

    /// Volume computed from a triangulation pulled from the last vertex.
    pub fn volume_alt(&self) -> Rational {
        self.volume_by(true)
    }

    /// Integer bounding box `(lo, hi)` of the vertices.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        if self.is_empty() {
            return None;
        }
        let d = self.ambient_dim;
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for v in &self.vertices {
            for i in 0..d {
                let f = v.0[i].floor().to_integer().to_i64().unwrap_or(i64::MIN / 2);
                let c = v.0[i].ceil().to_integer().to_i64().unwrap_or(i64::MAX / 2);
                lo[i] = lo[i].min(f);
                hi[i] = hi[i].max(c);
            }
        }
        Some((lo, hi))
    }

    /// All lattice points, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        let Some((lo, hi)) = self.bounding_box() else {
            return Vec::new();
        };
        super::LatticeBox::new(lo, hi)
            .points()
            .filter(|p| self.hrep.contains_lattice(p))
            .map(LatticeVector)
            .collect()
    }

    pub fn count_lattice_points(&self) -> usize {
        let Some((lo, hi)) = self.bounding_box() else {
            return 0;
        };
        super::LatticeBox::new(lo, hi).points().filter(|p| self.hrep.contains_lattice(p)).count()
    }
}

/// Counts of faces by dimension.
pub fn f_vector(p: &VPolytope) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for (_, k) in p.face_sets() {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}
