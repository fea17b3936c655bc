//! Rational polyhedral fans indexed by ray subsets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_traits::One;

use super::arith;
use super::cone::Cone;
use super::{LatticeError, LatticeVector, RationalVector, MAX_REFINE_DIM};

/// A cone of a fan given by indices into the fan's ray list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FanCone {
    pub rays: Vec<usize>,
    pub dim: usize,
}

/// A fan, closed under faces; cones are sorted by dimension then ray list,
/// so index 0 is always the zero cone.
#[derive(Clone, Debug)]
pub struct Fan {
    ambient_dim: usize,
    lineality: Vec<LatticeVector>,
    rays: Vec<LatticeVector>,
    cones: Vec<FanCone>,
    index: HashMap<Vec<usize>, usize>,
    maximal: Vec<usize>,
    complete: bool,
    realized: OnceLock<Vec<Cone>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.lineality == other.lineality
            && self.rays == other.rays
            && self.cones == other.cones
    }
}

fn not_a_fan(msg: String) -> LatticeError {
    LatticeError::NotAFan(msg)
}

impl Fan {
    /// Builds and validates a pointed fan from rays and (possibly only
    /// maximal) cones given as ray index lists.
    pub fn new(ambient_dim: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Fan, LatticeError> {
        let mut prim = Vec::with_capacity(rays.len());
        let mut lookup: HashMap<LatticeVector, usize> = HashMap::new();
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != ambient_dim {
                return Err(LatticeError::DimensionMismatch { expected: ambient_dim, found: r.dim() });
            }
            if r.is_zero() {
                return Err(LatticeError::ZeroVector);
            }
            let p = r.primitive();
            if let Some(j) = lookup.insert(p.clone(), i) {
                return Err(not_a_fan(format!("rays {j} and {i} span the same ray")));
            }
            prim.push(p);
        }

        let mut faces: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut proper: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut inputs: Vec<(Vec<usize>, Cone)> = Vec::new();
        faces.insert(Vec::new(), 0);
        for c in &cones {
            let mut ids = c.clone();
            ids.sort_unstable();
            ids.dedup();
            if let Some(&bad) = ids.iter().find(|&&i| i >= prim.len()) {
                return Err(not_a_fan(format!("cone {c:?} refers to missing ray {bad}")));
            }
            let gens: Vec<LatticeVector> = ids.iter().map(|&i| prim[i].clone()).collect();
            let cone = Cone::new(ambient_dim, &gens)?;
            if !cone.is_pointed() {
                return Err(LatticeError::NotStrictlyConvex(ids));
            }
            if cone.rays().len() != ids.len() {
                return Err(not_a_fan(format!("cone {ids:?} has a generator that is not an extreme ray")));
            }
            for face in cone.face_ray_sets() {
                let mut f: Vec<usize> = face.iter().map(|&k| lookup[&cone.rays()[k]]).collect();
                f.sort_unstable();
                if f.len() < ids.len() {
                    proper.insert(f.clone());
                }
                faces.entry(f).or_insert_with_key(|f| {
                    let rows: Vec<Vec<i64>> = f.iter().map(|&k| prim[k].0.clone()).collect();
                    if rows.is_empty() {
                        0
                    } else {
                        arith::rank_i64(&rows)
                    }
                });
            }
            inputs.push((ids, cone));
        }
        for i in 0..prim.len() {
            if !faces.contains_key(&vec![i]) {
                return Err(not_a_fan(format!("ray {i} lies in no cone")));
            }
        }

        let mut maximal_inputs: Vec<&(Vec<usize>, Cone)> = Vec::new();
        let mut seen = BTreeSet::new();
        for inp in &inputs {
            if !proper.contains(&inp.0) && seen.insert(inp.0.clone()) {
                maximal_inputs.push(inp);
            }
        }
        for a in 0..maximal_inputs.len() {
            for b in a + 1..maximal_inputs.len() {
                let (ia, ca) = maximal_inputs[a];
                let (ib, cb) = maximal_inputs[b];
                let mut facets = ca.facets().to_vec();
                facets.extend_from_slice(cb.facets());
                let mut eqs = ca.equations().to_vec();
                eqs.extend_from_slice(cb.equations());
                let meet = Cone::from_inequalities(ambient_dim, facets, eqs)?;
                let common: Vec<usize> = ia.iter().filter(|i| ib.contains(i)).copied().collect();
                let ok = meet
                    .rays()
                    .iter()
                    .all(|r| lookup.get(r).is_some_and(|k| common.contains(k)))
                    && faces.contains_key(&common);
                if !ok {
                    return Err(not_a_fan(format!("cones {ia:?} and {ib:?} do not meet in a common face")));
                }
            }
        }

        let cone_list: Vec<FanCone> = faces.into_iter().map(|(rays, dim)| FanCone { rays, dim }).collect();
        let fan = Fan::assemble(ambient_dim, Vec::new(), prim, cone_list, None);
        Ok(fan)
    }

    /// Assembles a fan from trusted combinatorial data; the cone list must be
    /// closed under faces. Completeness is computed by facet pairing unless
    /// given.
    pub fn from_combinatorial(
        ambient_dim: usize,
        lineality: Vec<LatticeVector>,
        rays: Vec<LatticeVector>,
        cones: Vec<FanCone>,
        complete: Option<bool>,
    ) -> Fan {
        Fan::assemble(ambient_dim, lineality, rays, cones, complete)
    }

    fn assemble(
        ambient_dim: usize,
        lineality: Vec<LatticeVector>,
        rays: Vec<LatticeVector>,
        mut cones: Vec<FanCone>,
        complete: Option<bool>,
    ) -> Fan {
        for c in cones.iter_mut() {
            c.rays.sort_unstable();
        }
        cones.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.rays.cmp(&b.rays)));
        cones.dedup();
        let index: HashMap<Vec<usize>, usize> = cones.iter().enumerate().map(|(i, c)| (c.rays.clone(), i)).collect();
        let mut is_max = vec![true; cones.len()];
        for (i, c) in cones.iter().enumerate() {
            for r in 0..c.rays.len() {
                let mut f = c.rays.clone();
                f.remove(r);
                if let Some(&j) = index.get(&f) {
                    is_max[j] = false;
                }
            }
            if c.rays.is_empty() && cones.len() > 1 {
                is_max[i] = false;
            }
        }
        // Faces of non-simplicial cones need not arise by dropping one ray.
        let simplicial = cones.iter().all(|c| c.rays.len() == c.dim);
        let maximal: Vec<usize> = (0..cones.len())
            .filter(|&i| {
                is_max[i]
                    && (simplicial
                        || !cones.iter().any(|c| {
                            c.rays.len() > cones[i].rays.len() && cones[i].rays.iter().all(|r| c.rays.contains(r))
                        }))
            })
            .collect();
        let lin_dim = lineality.len();
        let full = ambient_dim - lin_dim;
        let complete = complete.unwrap_or_else(|| {
            if full == 0 {
                return true;
            }
            if maximal.iter().any(|&i| cones[i].dim != full) {
                return false;
            }
            let mut count: HashMap<&[usize], usize> = HashMap::new();
            for c in cones.iter().filter(|c| c.dim + 1 == full) {
                count.insert(&c.rays, 0);
            }
            for &m in &maximal {
                for c in cones.iter().filter(|c| c.dim + 1 == full) {
                    if c.rays.iter().all(|r| cones[m].rays.contains(r)) {
                        *count.get_mut(&c.rays[..]).expect("registered") += 1;
                    }
                }
            }
            !maximal.is_empty() && count.values().all(|&k| k == 2)
        });
        Fan { ambient_dim, lineality, rays, cones, index, maximal, complete, realized: OnceLock::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn cones(&self) -> &[FanCone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &FanCone {
        &self.cones[i]
    }

    pub fn cone_index(&self, rays: &[usize]) -> Option<usize> {
        let mut r = rays.to_vec();
        r.sort_unstable();
        self.index.get(&r).copied()
    }

    pub fn maximal_cones(&self) -> &[usize] {
        &self.maximal
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Codimension relative to the lineality quotient.
    pub fn codim(&self, i: usize) -> usize {
        self.ambient_dim - self.lineality.len() - self.cones[i].dim
    }

    /// Geometric realizations of all cones, computed once.
    pub fn realized(&self) -> &[Cone] {
        self.realized.get_or_init(|| {
            self.cones
                .iter()
                .map(|c| {
                    let gens: Vec<LatticeVector> = c.rays.iter().map(|&r| self.rays[r].clone()).collect();
                    Cone::from_generators(self.ambient_dim, &gens, &self.lineality).expect("valid fan cone")
                })
                .collect()
        })
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.rays.len() == c.dim)
    }

    /// Rays of every maximal cone extend to a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.maximal.iter().all(|&i| self.is_cone_smooth(i))
    }

    pub fn is_cone_smooth(&self, i: usize) -> bool {
        let c = &self.cones[i];
        if c.rays.len() != c.dim {
            return false;
        }
        let mut rows: Vec<Vec<i64>> = c.rays.iter().map(|&r| self.rays[r].0.clone()).collect();
        rows.extend(self.lineality.iter().map(|l| l.0.clone()));
        arith::maximal_minor_gcd(&rows).is_one()
    }

    /// Index of the smallest cone containing `x`.
    pub fn min_containing_cone(&self, x: &RationalVector) -> Result<usize, LatticeError> {
        if x.dim() != self.ambient_dim {
            return Err(LatticeError::DimensionMismatch { expected: self.ambient_dim, found: x.dim() });
        }
        let realized = self.realized();
        (0..self.cones.len()).find(|&i| realized[i].contains(x)).ok_or(LatticeError::NotInSupport)
    }

    /// Whether `self` refines `coarse`: same support and every cone of
    /// `self` lies in a cone of `coarse`.
    pub fn is_refinement(&self, coarse: &Fan) -> bool {
        if self.ambient_dim != coarse.ambient_dim {
            return false;
        }
        let big = coarse.realized();
        let inside = |c: &FanCone, k: usize| c.rays.iter().all(|&r| big[k].contains_lattice(&self.rays[r].0));
        if !self.maximal.iter().all(|&m| coarse.maximal.iter().any(|&k| inside(&self.cones[m], k))) {
            return false;
        }
        if coarse.complete {
            return self.complete;
        }
        for &k in &coarse.maximal {
            let dim = coarse.cones[k].dim;
            let parts: Vec<usize> =
                self.maximal.iter().copied().filter(|&m| self.cones[m].dim == dim && inside(&self.cones[m], k)).collect();
            if parts.is_empty() {
                return false;
            }
            let walls: Vec<&FanCone> = self
                .cones
                .iter()
                .filter(|c| c.dim + 1 == dim && parts.iter().any(|&m| c.rays.iter().all(|r| self.cones[m].rays.contains(r))))
                .collect();
            for w in walls {
                let n = parts
                    .iter()
                    .filter(|&&m| w.rays.iter().all(|r| self.cones[m].rays.contains(r)))
                    .count();
                let on_boundary = big[k]
                    .facets()
                    .iter()
                    .any(|f| w.rays.iter().all(|&r| f.pairing(&self.rays[r]) == 0));
                let ok = (n == 2 && !on_boundary) || (n == 1 && on_boundary);
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Common refinement with the sign cells of linear hyperplanes
    /// `{x : ⟨a, x⟩ = 0}`.
    pub fn refine_by_hyperplanes(&self, normals: &[LatticeVector]) -> Result<Fan, LatticeError> {
        if self.ambient_dim > MAX_REFINE_DIM {
            return Err(LatticeError::UnsupportedDimension {
                op: "refine_by_hyperplanes",
                dim: self.ambient_dim,
                max: MAX_REFINE_DIM,
            });
        }
        for a in normals {
            if a.dim() != self.ambient_dim {
                return Err(LatticeError::DimensionMismatch { expected: self.ambient_dim, found: a.dim() });
            }
        }
        if normals.is_empty() {
            return Ok(self.clone());
        }
        let realized = self.realized();
        let mut cells: Vec<Cone> = Vec::new();
        for &m in &self.maximal {
            let dim = self.cones[m].dim;
            let mut current = vec![realized[m].clone()];
            for a in normals.iter().filter(|a| !a.is_zero()) {
                let mut next = Vec::new();
                for cell in current {
                    let signs: Vec<i64> = cell.rays().iter().map(|r| a.pairing(r).signum()).collect();
                    if signs.iter().all(|&s| s >= 0) || signs.iter().all(|&s| s <= 0) {
                        next.push(cell);
                        continue;
                    }
                    for side in [a.clone(), a.neg()] {
                        let mut f = cell.facets().to_vec();
                        f.push(side);
                        let piece = Cone::from_inequalities(self.ambient_dim, f, cell.equations().to_vec())?;
                        if piece.dim() == dim {
                            next.push(piece);
                        }
                    }
                }
                current = next;
            }
            cells.extend(current);
        }
        let mut rays: Vec<LatticeVector> = self.rays.clone();
        let mut lookup: HashMap<LatticeVector, usize> =
            rays.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let mut cone_ids = Vec::new();
        for cell in &cells {
            let mut ids = Vec::new();
            for r in cell.rays() {
                let k = *lookup.entry(r.clone()).or_insert_with(|| {
                    rays.push(r.clone());
                    rays.len() - 1
                });
                ids.push(k);
            }
            cone_ids.push(ids);
        }
        Fan::new(self.ambient_dim, rays, cone_ids)
    }

    /// Stellar subdivision at a primitive vector in the support.
    pub fn stellar_subdivision(&self, v: &LatticeVector) -> Result<Fan, LatticeError> {
        if v.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        let v = v.primitive();
        if self.rays.contains(&v) {
            return Ok(self.clone());
        }
        let tau = self.min_containing_cone(&v.to_rational())?;
        let t = &self.cones[tau].rays;
        let new_id = self.rays.len();
        let mut rays = self.rays.clone();
        rays.push(v);
        let mut out = Vec::new();
        for &m in &self.maximal {
            let s = &self.cones[m];
            if !t.iter().all(|r| s.rays.contains(r)) {
                out.push(s.rays.clone());
                continue;
            }
            for f in self.cones.iter().filter(|c| c.dim + 1 == s.dim) {
                if f.rays.iter().all(|r| s.rays.contains(r)) && !t.iter().all(|r| f.rays.contains(r)) {
                    let mut c = f.rays.clone();
                    c.push(new_id);
                    out.push(c);
                }
            }
        }
        Fan::new(self.ambient_dim, rays, out)
    }

    /// Indices of cones of the given codimension.
    pub fn cones_of_codim(&self, k: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| self.codim(i) == k).collect()
    }

    /// Ray generators of cone `i`.
    pub fn cone_rays(&self, i: usize) -> Vec<LatticeVector> {
        self.cones[i].rays.iter().map(|&r| self.rays[r].clone()).collect()
    }
}
