//! Support functions on complete fans and their chains.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{invert_polytope, ChainError, ConvexChain, Piece};
use crate::lattice::arith::{self, Rational};
use crate::lattice::{rat, Fan, Halfspace, HPolyhedron, LatticeVector, RationalVector};

/// Values of a piecewise linear function on the rays of a fixed fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportNumbers(pub Vec<Rational>);

impl SupportNumbers {
    pub fn from_ints(v: &[i64]) -> Self {
        SupportNumbers(arith::lift_i64(v))
    }

    pub fn zeros(n: usize) -> Self {
        SupportNumbers(vec![Rational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &SupportNumbers) -> SupportNumbers {
        SupportNumbers(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &Rational) -> SupportNumbers {
        SupportNumbers(self.0.iter().map(|a| a * k).collect())
    }
}

fn check_len(fan: &Fan, z: &SupportNumbers) -> Result<(), ChainError> {
    if z.len() != fan.rays().len() {
        return Err(ChainError::DimensionMismatch { expected: fan.rays().len(), found: z.len() });
    }
    Ok(())
}

/// A linear functional agreeing with `z` on the rays of cone `i`.
pub fn cone_functional(fan: &Fan, i: usize, z: &SupportNumbers) -> Option<RationalVector> {
    let c = fan.cone(i);
    if c.rays.is_empty() {
        return Some(RationalVector::zero(fan.ambient_dim()));
    }
    let rows: Vec<Vec<Rational>> = c.rays.iter().map(|&r| arith::lift_i64(&fan.ray(r).0)).collect();
    let rhs: Vec<Rational> = c.rays.iter().map(|&r| z.0[r].clone()).collect();
    arith::solve_any(&rows, &rhs, fan.ambient_dim()).map(RationalVector)
}

fn maximal_functionals(fan: &Fan, z: &SupportNumbers) -> Result<Vec<RationalVector>, ChainError> {
    check_len(fan, z)?;
    fan.maximal_cones()
        .iter()
        .map(|&m| cone_functional(fan, m, z).ok_or_else(|| ChainError::NotPiecewiseLinear { cone: fan.cone(m).rays.clone() }))
        .collect()
}

/// `P(z) = {u : ⟨u, v_ρ⟩ ≤ z_ρ for all rays}`.
pub fn support_polytope(fan: &Fan, z: &SupportNumbers) -> Result<HPolyhedron, ChainError> {
    check_len(fan, z)?;
    let ineqs = fan.rays().iter().zip(&z.0).map(|(v, b)| Halfspace::new(v.clone(), b.clone())).collect();
    Ok(HPolyhedron::from_inequalities(fan.ambient_dim(), ineqs)?)
}

/// `⟨u_σ, v_ρ⟩ ≤ z_ρ` for every maximal cone and every ray.
pub fn is_convex(fan: &Fan, z: &SupportNumbers) -> bool {
    let Ok(us) = maximal_functionals(fan, z) else {
        return false;
    };
    us.iter().all(|u| fan.rays().iter().zip(&z.0).all(|(v, b)| &u.pairing_lattice(v) <= b))
}

/// Convex with strict inequality off each maximal cone.
pub fn is_strictly_convex(fan: &Fan, z: &SupportNumbers) -> bool {
    let Ok(us) = maximal_functionals(fan, z) else {
        return false;
    };
    fan.maximal_cones().iter().zip(&us).all(|(&m, u)| {
        let own = &fan.cone(m).rays;
        fan.rays().iter().enumerate().all(|(r, v)| {
            let val = u.pairing_lattice(v);
            if own.contains(&r) {
                val == z.0[r]
            } else {
                val < z.0[r]
            }
        })
    })
}

/// A strictly convex support function: a short list of candidates, then
/// the sum of the extreme rays of the cone of convex functions.
pub fn find_strictly_convex(fan: &Fan) -> Result<SupportNumbers, ChainError> {
    let n = fan.rays().len();
    let norm = |p: fn(&LatticeVector) -> i64| SupportNumbers(fan.rays().iter().map(|v| rat(p(v))).collect());
    let candidates = [
        SupportNumbers(vec![Rational::one(); n]),
        norm(|v| v.0.iter().map(|x| x.abs()).sum()),
        norm(|v| v.0.iter().map(|x| x.abs()).max().unwrap_or(0)),
        norm(|v| v.0.iter().map(|x| x * x).sum()),
    ];
    if let Some(z) = candidates.into_iter().find(|z| is_strictly_convex(fan, z)) {
        return Ok(z);
    }
    let z = nef_interior_point(fan).ok_or(ChainError::NoStrictlyConvex)?;
    if is_strictly_convex(fan, &z) {
        Ok(z)
    } else {
        Err(ChainError::NoStrictlyConvex)
    }
}

/// Sum of the extreme rays of `{z : convex}`; requires full-dimensional
/// simplicial maximal cones.
fn nef_interior_point(fan: &Fan) -> Option<SupportNumbers> {
    let d = fan.ambient_dim();
    let s = fan.rays().len();
    let mut cons: Vec<Vec<num_bigint::BigInt>> = Vec::new();
    for &m in fan.maximal_cones() {
        let own = &fan.cone(m).rays;
        if own.len() != d {
            return None;
        }
        // Row i of the transpose: i-th coordinates of the cone's rays.
        let rows: Vec<Vec<Rational>> = (0..d).map(|i| own.iter().map(|&r| rat(fan.ray(r).0[i])).collect()).collect();
        for (r, v) in fan.rays().iter().enumerate() {
            if own.contains(&r) {
                continue;
            }
            // ⟨u_σ, v⟩ = Σ_j c_j z_{σ_j} with Mᵀc = v.
            let c = arith::solve_unique(&rows, &arith::lift_i64(&v.0), d)?;
            let mut row = vec![Rational::zero(); s];
            row[r] = Rational::one();
            for (j, &k) in own.iter().enumerate() {
                row[k] -= &c[j];
            }
            let den = row.iter().fold(num_bigint::BigInt::one(), |a, x| num_integer::Integer::lcm(&a, x.denom()));
            cons.push(row.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect());
        }
    }
    let g = crate::lattice::dd::cone_generators(&cons, s);
    let mut z = vec![Rational::zero(); s];
    for ray in &g.rays {
        for (a, b) in z.iter_mut().zip(ray) {
            *a += Rational::from_integer(b.clone());
        }
    }
    Some(SupportNumbers(z))
}

/// `Σ_σ (−1)^{codim σ} 1_{C_σ}` with `C_σ = {u : ⟨u, v_ρ⟩ ≤ z_ρ, ρ ∈ σ(1)}`.
pub fn brianchon_gram(fan: &Fan, z: &SupportNumbers) -> Result<ConvexChain, ChainError> {
    if !fan.is_complete() {
        return Err(ChainError::FanNotComplete);
    }
    maximal_functionals(fan, z)?;
    let d = fan.ambient_dim();
    let mut terms = Vec::with_capacity(fan.cones().len());
    for (i, c) in fan.cones().iter().enumerate() {
        let ineqs = c.rays.iter().map(|&r| Halfspace::new(fan.ray(r).clone(), z.0[r].clone())).collect();
        let sign = if fan.codim(i) % 2 == 0 { 1 } else { -1 };
        terms.push((sign, Piece::Polyhedron(HPolyhedron::from_inequalities(d, ineqs)?)));
    }
    ConvexChain::from_terms(d, terms)
}

/// A multiset of `r` linear functionals on each maximal cone of a complete
/// fan, aligned with `fan.maximal_cones()`.
#[derive(Clone, Debug)]
pub struct MultiValuedSupportFunction {
    fan: Fan,
    branches: Vec<Vec<LatticeVector>>,
}

fn restricted(fan: &Fan, rays: &[usize], us: &[LatticeVector]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = us.iter().map(|u| rays.iter().map(|&r| u.pairing(fan.ray(r))).collect()).collect();
    out.sort();
    out
}

impl MultiValuedSupportFunction {
    pub fn new(fan: Fan, branches: Vec<Vec<LatticeVector>>) -> Result<Self, ChainError> {
        if !fan.is_complete() {
            return Err(ChainError::FanNotComplete);
        }
        let maxes = fan.maximal_cones().to_vec();
        if branches.len() != maxes.len() {
            return Err(ChainError::InvalidSupportFunction(format!(
                "{} branch lists for {} maximal cones",
                branches.len(),
                maxes.len()
            )));
        }
        let r = branches.first().map_or(0, |b| b.len());
        for (k, b) in branches.iter().enumerate() {
            if b.len() != r {
                return Err(ChainError::InvalidSupportFunction(format!(
                    "cone {:?} has {} branches, expected {r}",
                    fan.cone(maxes[k]).rays,
                    b.len()
                )));
            }
            if let Some(u) = b.iter().find(|u| u.dim() != fan.ambient_dim()) {
                return Err(ChainError::DimensionMismatch { expected: fan.ambient_dim(), found: u.dim() });
            }
        }
        for a in 0..maxes.len() {
            for b in a + 1..maxes.len() {
                let ra = &fan.cone(maxes[a]).rays;
                let common: Vec<usize> = fan.cone(maxes[b]).rays.iter().copied().filter(|x| ra.contains(x)).collect();
                if common.is_empty() {
                    continue;
                }
                if restricted(&fan, &common, &branches[a]) != restricted(&fan, &common, &branches[b]) {
                    return Err(ChainError::InvalidSupportFunction(format!(
                        "branches of cones {:?} and {:?} disagree on their common face",
                        ra,
                        fan.cone(maxes[b]).rays
                    )));
                }
            }
        }
        Ok(MultiValuedSupportFunction { fan, branches })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn rank(&self) -> usize {
        self.branches.first().map_or(0, |b| b.len())
    }

    /// Functionals on the `k`-th maximal cone.
    pub fn branches(&self, k: usize) -> &[LatticeVector] {
        &self.branches[k]
    }

    pub fn all_branches(&self) -> &[Vec<LatticeVector>] {
        &self.branches
    }

    fn containing_maximal(&self, x: &RationalVector) -> Option<usize> {
        let realized = self.fan.realized();
        self.fan.maximal_cones().iter().position(|&m| realized[m].contains(x))
    }

    /// Sorted branch values at `x`.
    pub fn values_at(&self, x: &RationalVector) -> Option<Vec<Rational>> {
        let k = self.containing_maximal(x)?;
        let mut v: Vec<Rational> = self.branches[k].iter().map(|u| x.pairing_lattice(u)).collect();
        v.sort();
        Some(v)
    }

    /// Splits into `r` one-valued branches (i-th smallest value) on the
    /// refinement by all difference hyperplanes and the extra normals.
    pub fn decompose(&self, extra_normals: &[LatticeVector]) -> Result<BranchDecomposition, ChainError> {
        let mut normals: BTreeSet<LatticeVector> = BTreeSet::new();
        for b in &self.branches {
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    let d = b[i].sub(&b[j]);
                    if !d.is_zero() {
                        normals.insert(canonical_sign(d.primitive()));
                    }
                }
            }
        }
        for a in extra_normals.iter().filter(|a| !a.is_zero()) {
            normals.insert(canonical_sign(a.primitive()));
        }
        let normals: Vec<LatticeVector> = normals.into_iter().collect();
        let refined = self.fan.refine_by_hyperplanes(&normals)?;
        let r = self.rank();
        let mut branches = vec![Vec::with_capacity(refined.rays().len()); r];
        for v in refined.rays() {
            let vals = self
                .values_at(&v.to_rational())
                .ok_or_else(|| ChainError::InvalidSupportFunction("refined ray outside the fan".into()))?;
            for (i, x) in vals.into_iter().enumerate() {
                branches[i].push(x);
            }
        }
        Ok(BranchDecomposition {
            base: self.fan.clone(),
            fan: refined,
            normals,
            branches: branches.into_iter().map(SupportNumbers).collect(),
        })
    }

    /// The chain `Σ_i BG(𝔥_i)` of the one-valued branches.
    pub fn chain(&self) -> Result<ConvexChain, ChainError> {
        self.decompose(&[])?.chain()
    }
}

fn canonical_sign(v: LatticeVector) -> LatticeVector {
    match v.0.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.neg(),
        _ => v,
    }
}

/// One-valued branches of a multi-valued support function on a common
/// refinement.
#[derive(Clone, Debug)]
pub struct BranchDecomposition {
    base: Fan,
    fan: Fan,
    normals: Vec<LatticeVector>,
    branches: Vec<SupportNumbers>,
}

impl BranchDecomposition {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn base_fan(&self) -> &Fan {
        &self.base
    }

    pub fn normals(&self) -> &[LatticeVector] {
        &self.normals
    }

    /// Support numbers of the `i`-th smallest branch on the refined fan.
    pub fn branches(&self) -> &[SupportNumbers] {
        &self.branches
    }

    pub fn branch_chain(&self, i: usize) -> Result<ConvexChain, ChainError> {
        brianchon_gram(&self.fan, &self.branches[i])
    }

    pub fn chain(&self) -> Result<ConvexChain, ChainError> {
        let mut out = ConvexChain::zero(self.fan.ambient_dim());
        for i in 0..self.branches.len() {
            out = out.add(&self.branch_chain(i)?);
        }
        Ok(out)
    }

    /// Values on the refined rays of a function that is linear on each cone
    /// of the base fan.
    pub fn lift(&self, z: &SupportNumbers) -> Result<SupportNumbers, ChainError> {
        let maxes = self.base.maximal_cones();
        let us = maximal_functionals(&self.base, z)?;
        let realized = self.base.realized();
        let mut out = Vec::with_capacity(self.fan.rays().len());
        for v in self.fan.rays() {
            let k = maxes
                .iter()
                .position(|&m| realized[m].contains_lattice(&v.0))
                .ok_or_else(|| ChainError::InvalidSupportFunction("refined ray outside the fan".into()))?;
            out.push(us[k].pairing_lattice(v));
        }
        Ok(SupportNumbers(out))
    }

    /// A strictly convex function on the refined fan: a strictly convex
    /// function of the base plus `Σ |⟨a, x⟩|` over the refining normals.
    pub fn strictly_convex_numbers(&self) -> Result<SupportNumbers, ChainError> {
        let base = find_strictly_convex(&self.base)?;
        let mut z = self.lift(&base)?;
        for (i, v) in self.fan.rays().iter().enumerate() {
            let extra: i64 = self.normals.iter().map(|a| a.pairing(v).abs()).sum();
            z.0[i] += rat(extra);
        }
        if !is_strictly_convex(&self.fan, &z) {
            return Err(ChainError::NoStrictlyConvex);
        }
        Ok(z)
    }

    /// The `i`-th branch realized as `1_{P(z_i + cζ)} * (1_{P(cζ)})^{-1}`
    /// with `ζ` strictly convex and `c` large enough for convexity.
    pub fn inverse_route_chain(&self, i: usize) -> Result<ConvexChain, ChainError> {
        let zeta = self.strictly_convex_numbers()?;
        let z = &self.branches[i];
        let mut c = Rational::one();
        for _ in 0..64 {
            let w = z.add(&zeta.scale(&c));
            if is_convex(&self.fan, &w) {
                let plus = support_polytope(&self.fan, &w)?.vertex_enumeration()?;
                let minus = support_polytope(&self.fan, &zeta.scale(&c))?.vertex_enumeration()?;
                return ConvexChain::indicator(plus).convolve(&invert_polytope(&minus));
            }
            c *= rat(2);
        }
        Err(ChainError::NoStrictlyConvex)
    }

    /// `true` when the `i`-th branch is convex on the refined fan.
    pub fn branch_is_convex(&self, i: usize) -> bool {
        is_convex(&self.fan, &self.branches[i])
    }

    /// Number of lattice points of `P(z_i)` when the branch is convex.
    pub fn branch_polytope_points(&self, i: usize) -> Result<Option<usize>, ChainError> {
        if !self.branch_is_convex(i) {
            return Ok(None);
        }
        let p = support_polytope(&self.fan, &self.branches[i])?.vertex_enumeration()?;
        Ok(Some(p.count_lattice_points()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    fn p2() -> Fan {
        Fan::new(2, vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn bg_of_triangle() {
        let f = p2();
        let z = SupportNumbers::from_ints(&[1, 1, 1]);
        assert!(is_strictly_convex(&f, &z));
        let chain = brianchon_gram(&f, &z).unwrap();
        let p = support_polytope(&f, &z).unwrap();
        for u in crate::lattice::LatticeBox::cube(2, 4).points() {
            assert_eq!(chain.evaluate_lattice(&u), p.contains_lattice(&u) as i64, "{u:?}");
        }
        assert_eq!(chain.lattice_sum_default().unwrap(), 10);
    }

    #[test]
    fn bg_of_zero_is_origin() {
        let f = p2();
        let chain = brianchon_gram(&f, &SupportNumbers::zeros(3)).unwrap();
        for u in crate::lattice::LatticeBox::cube(2, 3).points() {
            assert_eq!(chain.evaluate_lattice(&u), (u == vec![0, 0]) as i64);
        }
    }

    #[test]
    fn non_linear_numbers_rejected() {
        let sq = Fan::new(
            2,
            vec![lv(&[1, 0]), lv(&[1, 1]), lv(&[0, 1]), lv(&[-1, 0]), lv(&[0, -1])],
            vec![vec![0, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
        );
        // (1,1) is not extreme in cone(0,2), so this is not a fan.
        assert!(sq.is_err());
        let f = p2();
        assert!(brianchon_gram(&f, &SupportNumbers::from_ints(&[1, 1])).is_err());
    }

    #[test]
    fn rank_one_chain_is_bg() {
        let f = p2();
        let h = MultiValuedSupportFunction::new(
            f.clone(),
            vec![vec![lv(&[1, 1])], vec![lv(&[1, -2])], vec![lv(&[-2, 1])]],
        )
        .unwrap();
        let a = h.chain().unwrap();
        let b = brianchon_gram(&f, &SupportNumbers::from_ints(&[1, 1, 1])).unwrap();
        for u in crate::lattice::LatticeBox::cube(2, 4).points() {
            assert_eq!(a.evaluate_lattice(&u), b.evaluate_lattice(&u));
        }
    }

    #[test]
    fn inconsistent_branches_rejected() {
        let f = p2();
        let r = MultiValuedSupportFunction::new(f, vec![vec![lv(&[1, 1])], vec![lv(&[0, 1])], vec![lv(&[1, -2])]]);
        assert!(matches!(r, Err(ChainError::InvalidSupportFunction(_))));
    }

    #[test]
    fn strictly_convex_after_repeated_blowups() {
        let mut f = p2();
        let mut used_fallback = false;
        for v in [[1, 1], [2, 1], [3, 1], [4, 1], [-1, 0]] {
            f = f.stellar_subdivision(&lv(&v)).unwrap();
            let z = find_strictly_convex(&f).unwrap();
            assert!(is_strictly_convex(&f, &z));
            used_fallback |= nef_interior_point(&f).is_some_and(|w| w == z);
        }
        assert!(used_fallback);
    }
}
