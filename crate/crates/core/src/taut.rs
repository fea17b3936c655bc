//! The tautological bundle of a matroid on the permutahedral variety.
//!
//! Cones of the permutahedral fan are flags of nonempty proper subsets of
//! the ground set; the fan lives in `Z^m` with lineality `R·e_G`, and all
//! pairings are taken in `Z^m` directly.

use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{Fan, FanCone, LatticeBox, LatticeVector, Rational};
use crate::matroid::{ElementSet, Matroid, MatroidError};
use crate::tropvb::{BundleError, Diagram, TropicalVectorBundle};

/// Largest ground set for flag enumeration.
pub const MAX_PERMUTAHEDRAL: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TautError {
    #[error("permutahedral fans are enumerated for m ≤ {max}, got {m}")]
    TooLarge { m: usize, max: usize },
    #[error("not a flag of subsets: {0}")]
    NotAFlag(String),
    #[error("character {u:?} has length {found}, expected {expected}")]
    WrongLength { u: Vec<i64>, expected: usize, found: usize },
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// `S_1 ⊊ … ⊊ S_l = G` with `S_1` nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagOfSubsets(Vec<ElementSet>);

impl FlagOfSubsets {
    pub fn new(m: usize, chain: Vec<ElementSet>) -> Result<Self, TautError> {
        if chain.last() != Some(&ElementSet::full(m)) {
            return Err(TautError::NotAFlag(format!("{chain:?} does not end at the ground set")));
        }
        if chain.first().is_some_and(|s| s.is_empty()) {
            return Err(TautError::NotAFlag("first entry is empty".into()));
        }
        if chain.windows(2).any(|w| !(w[0].is_subset(w[1]) && w[0] != w[1])) {
            return Err(TautError::NotAFlag(format!("{chain:?} is not strictly increasing")));
        }
        Ok(FlagOfSubsets(chain))
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.0
    }

    /// Number of entries including the ground set.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn pairing(u: &[i64], s: ElementSet) -> i64 {
    s.iter().map(|i| u[i]).sum()
}

/// The normal fan of the permutahedron, one cone per flag.
#[derive(Clone, Debug)]
pub struct PermutahedralFan {
    m: usize,
    subsets: Vec<ElementSet>,
    fan: Fan,
}

impl PermutahedralFan {
    pub fn new(m: usize) -> Result<Self, TautError> {
        if m > MAX_PERMUTAHEDRAL || m == 0 {
            return Err(TautError::TooLarge { m, max: MAX_PERMUTAHEDRAL });
        }
        let full = ElementSet::full(m);
        let mut subsets: Vec<ElementSet> = (1..full.0).map(ElementSet).collect();
        subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(*b)));
        let index = |s: ElementSet| subsets.iter().position(|&t| t == s).expect("proper subset");
        let rays: Vec<LatticeVector> = subsets
            .iter()
            .map(|s| LatticeVector((0..m).map(|i| s.contains(i) as i64).collect()))
            .collect();
        let mut cones = Vec::new();
        let mut stack: Vec<(ElementSet, Vec<usize>)> = vec![(ElementSet::EMPTY, Vec::new())];
        while let Some((last, rs)) = stack.pop() {
            cones.push(FanCone { dim: rs.len() + 1, rays: rs.clone() });
            for &s in &subsets {
                if last.is_subset(s) && last != s {
                    let mut next = rs.clone();
                    next.push(index(s));
                    stack.push((s, next));
                }
            }
        }
        // Dimensions are recorded modulo the lineality.
        for c in cones.iter_mut() {
            c.dim -= 1;
        }
        let fan = Fan::from_combinatorial(m, vec![LatticeVector(vec![1; m])], rays, cones, Some(true));
        Ok(PermutahedralFan { m, subsets, fan })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Subset of each ray, in ray order: by size, then lexicographically.
    pub fn subsets(&self) -> &[ElementSet] {
        &self.subsets
    }

    pub fn ray_of(&self, s: ElementSet) -> Option<usize> {
        self.subsets.iter().position(|&t| t == s)
    }

    pub fn flag_of_cone(&self, cone: usize) -> FlagOfSubsets {
        let mut sets: Vec<ElementSet> = self.fan.cone(cone).rays.iter().map(|&r| self.subsets[r]).collect();
        sets.sort_by_key(|s| s.len());
        sets.push(ElementSet::full(self.m));
        FlagOfSubsets(sets)
    }

    pub fn cone_of_flag(&self, flag: &FlagOfSubsets) -> Option<usize> {
        let rays: Option<Vec<usize>> = flag.sets()[..flag.len() - 1].iter().map(|&s| self.ray_of(s)).collect();
        self.fan.cone_index(&rays?)
    }
}

/// The tautological bundle: the row of `S` is the indicator of its closure.
#[derive(Clone, Debug)]
pub struct TautologicalBundle {
    pfan: PermutahedralFan,
    bundle: TropicalVectorBundle,
}

/// Both section formulas at one character.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoPaths {
    pub closed_form: i64,
    pub generic: i64,
}

impl TwoPaths {
    pub fn agree(&self) -> bool {
        self.closed_form == self.generic
    }
}

/// Outcome of the vanishing sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub verified_box: LatticeBox,
    pub checked: usize,
    pub all_equal: bool,
    pub failures: Vec<VanishingFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingFailure {
    pub u: Vec<i64>,
    pub chi_flag_sum: i64,
    pub chi_generic: i64,
    pub h0_closed_form: i64,
    pub h0_generic: i64,
}

impl TautologicalBundle {
    pub fn new(matroid: &Matroid) -> Result<Self, TautError> {
        let m = matroid.ground_size();
        let pfan = PermutahedralFan::new(m)?;
        let rows = pfan
            .subsets()
            .iter()
            .map(|&s| {
                let cl = matroid.closure(s);
                (0..m).map(|i| cl.contains(i) as i64).collect()
            })
            .collect();
        let bundle = TropicalVectorBundle::new(pfan.fan().clone(), matroid.clone(), Diagram::new(m, rows)?)?;
        Ok(TautologicalBundle { pfan, bundle })
    }

    pub fn permutahedral_fan(&self) -> &PermutahedralFan {
        &self.pfan
    }

    pub fn bundle(&self) -> &TropicalVectorBundle {
        &self.bundle
    }

    pub fn matroid(&self) -> &Matroid {
        self.bundle.matroid()
    }

    fn m(&self) -> usize {
        self.pfan.m
    }

    fn check_len(&self, u: &[i64]) -> Result<(), TautError> {
        if u.len() != self.m() {
            return Err(TautError::WrongLength { u: u.to_vec(), expected: self.m(), found: u.len() });
        }
        Ok(())
    }

    /// Max-weight basis at the generic point `Σ_k e_{S_k}` of a flag's cone.
    pub fn flag_basis(&self, flag: &FlagOfSubsets) -> ElementSet {
        let w: Vec<Rational> = (0..self.m())
            .map(|i| Rational::from_integer(flag.sets().iter().filter(|s| s.contains(i)).count().into()))
            .collect();
        self.matroid().max_weight_basis(&w)
    }

    /// `{e_i : i ∈ B_σ}` for the flag's basis.
    pub fn characters(&self, flag: &FlagOfSubsets) -> Vec<LatticeVector> {
        self.flag_basis(flag).iter().map(|i| LatticeVector::unit(self.m(), i)).collect()
    }

    /// `1` if `u = e_i` for a non-loop `i`, else `0`, on the slice `Σu = 1`.
    pub fn h0_global_closed(&self, u: &[i64]) -> i64 {
        let loops = self.matroid().loops();
        let unit = u.iter().filter(|&&x| x == 1).count() == 1 && u.iter().all(|&x| x == 0 || x == 1);
        match u.iter().position(|&x| x == 1) {
            Some(i) if unit && !loops.contains(i) => 1,
            _ => 0,
        }
    }

    pub fn h0_global(&self, u: &[i64]) -> Result<TwoPaths, TautError> {
        self.check_len(u)?;
        Ok(TwoPaths { closed_form: self.h0_global_closed(u), generic: self.bundle.h0_global(u) as i64 })
    }

    /// `0` if some `⟨u, e_{S_k}⟩ > 1`, else the rank of the first entry with
    /// pairing `1`, or `0` when there is none.
    pub fn h0_local_closed(&self, flag: &FlagOfSubsets, u: &[i64]) -> i64 {
        let p: Vec<i64> = flag.sets().iter().map(|&s| pairing(u, s)).collect();
        if p.iter().any(|&x| x > 1) {
            return 0;
        }
        match flag.sets().iter().zip(&p).find(|(_, &x)| x == 1) {
            Some((&s, _)) => self.matroid().rank_of(s) as i64,
            None => 0,
        }
    }

    pub fn h0_local(&self, flag: &FlagOfSubsets, u: &[i64]) -> Result<TwoPaths, TautError> {
        self.check_len(u)?;
        let cone = self.pfan.cone_of_flag(flag).ok_or_else(|| TautError::NotAFlag(format!("{flag:?}")))?;
        Ok(TwoPaths { closed_form: self.h0_local_closed(flag, u), generic: self.bundle.h0_local(cone, u) as i64 })
    }

    /// `Σ_S Σ_{π ∈ Π_u(S)} (−1)^{m − l(π)} rank(S)`: flags with all pairings
    /// at most one, weighted by the rank of their first entry pairing to one.
    pub fn chi_flag_sum(&self, u: &[i64]) -> i64 {
        let m = self.m();
        let full = ElementSet::full(m);
        // Subsets reachable from the current chain end, with state
        // (last, length, first pairing-one entry).
        fn walk(t: &TautologicalBundle, u: &[i64], full: ElementSet, last: ElementSet, len: usize, first: Option<ElementSet>) -> i64 {
            let mut total = 0;
            let rest = full.difference(last);
            // Iterate nonempty subsets `a` of the remaining elements.
            let mut a = rest.0;
            while a != 0 {
                let next = last.union(ElementSet(a));
                let p = pairing(u, next);
                if p <= 1 {
                    let f = first.or(if p == 1 { Some(next) } else { None });
                    if next == full {
                        if let Some(s) = f {
                            let sign = if (t.m() - (len + 1)) % 2 == 0 { 1 } else { -1 };
                            total += sign * t.matroid().rank_of(s) as i64;
                        }
                    } else {
                        total += walk(t, u, full, next, len + 1, f);
                    }
                }
                a = (a - 1) & rest.0;
            }
            total
        }
        walk(self, u, full, ElementSet::EMPTY, 0, None)
    }

    /// `χ_u` by the flag sum and by the generic alternating sum over cones.
    pub fn chi_u(&self, u: &[i64]) -> Result<TwoPaths, TautError> {
        self.check_len(u)?;
        Ok(TwoPaths { closed_form: self.chi_flag_sum(u), generic: self.bundle.euler_char_u(u) })
    }

    /// Unsigned local rank sums by codimension, for example `[10, 11, 2]`.
    pub fn chi_by_codim(&self, u: &[i64]) -> Vec<i64> {
        self.bundle.euler_char_by_codim(u)
    }

    /// Compares `χ_u` (both paths) with `h⁰_u` (both paths) on every slice
    /// character `Σu = 1` with `|u_i| ≤ max_coord`, and requires all four to
    /// vanish on the slice points with largest coordinate `max_coord + 1`.
    pub fn vanishing_check(&self, max_coord: i64) -> VanishingReport {
        let m = self.m();
        let verified_box = LatticeBox::cube(m, max_coord);
        let outer = LatticeBox::cube(m, max_coord + 1);
        let slice: Vec<Vec<i64>> = outer.points().filter(|u| u.iter().sum::<i64>() == 1).collect();
        let failures: Vec<VanishingFailure> = slice
            .par_iter()
            .filter_map(|u| {
                let inside = verified_box.contains(u);
                let f = VanishingFailure {
                    u: u.clone(),
                    chi_flag_sum: self.chi_flag_sum(u),
                    chi_generic: self.bundle.euler_char_u(u),
                    h0_closed_form: self.h0_global_closed(u),
                    h0_generic: self.bundle.h0_global(u) as i64,
                };
                let vals = [f.chi_flag_sum, f.chi_generic, f.h0_closed_form, f.h0_generic];
                let ok = if inside { vals.iter().all(|&x| x == vals[0]) } else { vals.iter().all(|&x| x == 0) };
                (!ok).then_some(f)
            })
            .collect();
        VanishingReport { verified_box, checked: slice.len(), all_equal: failures.is_empty(), failures }
    }
}

/// `Σ_π (−1)^{l(π)}` over all flags of subsets of `[m]` (ordered set
/// partitions), by dynamic programming over subsets.
pub fn flag_alternating_sum(m: usize) -> i64 {
    assert!(m <= 20, "subset table too large");
    let n = 1usize << m;
    let mut g = vec![0i64; n];
    g[0] = 1;
    for t in 1..n {
        let mut a = t;
        let mut acc = 0;
        while a != 0 {
            acc -= g[t & !a];
            a = (a - 1) & t;
        }
        g[t] = acc;
    }
    g[n - 1]
}
