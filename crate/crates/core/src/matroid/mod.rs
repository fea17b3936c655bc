//! Matroids given by their bases, with rank, closure, flats and circuits
//! tabulated over all subsets of the ground set.

mod bergman;

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::lattice::{LatticeError, Rational, RationalVector, VPolytope};

pub use bergman::FlagOfFlats;

/// Largest supported ground set.
pub const MAX_GROUND: usize = 16;
/// Largest supported number of bases.
pub const MAX_BASES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set size {0} exceeds the limit of 16")]
    TooLarge(usize),
    #[error("too many bases ({0}, limit 10000)")]
    TooManyBases(usize),
    #[error("a matroid needs at least one basis")]
    NoBases,
    #[error("element {element} is outside the ground set of size {m}")]
    ElementOutOfRange { element: usize, m: usize },
    #[error("bases have different sizes")]
    NotEquicardinal,
    #[error("basis exchange fails for {b1} and {b2} at element {e}")]
    ExchangeViolation { b1: ElementSet, b2: ElementSet, e: usize },
    #[error("{0} is not a flag of flats")]
    NotAFlag(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Subset of the ground set as a bitmask; element `i` is bit `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet(pub u32);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn full(m: usize) -> Self {
        ElementSet(if m >= 32 { u32::MAX } else { (1u32 << m) - 1 })
    }

    pub fn singleton(e: usize) -> Self {
        ElementSet(1 << e)
    }

    pub fn from_elements(elems: &[usize]) -> Self {
        ElementSet(elems.iter().fold(0, |acc, &e| acc | (1 << e)))
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn with(self, e: usize) -> Self {
        ElementSet(self.0 | 1 << e)
    }

    pub fn without(self, e: usize) -> Self {
        ElementSet(self.0 & !(1 << e))
    }

    pub fn union(self, o: ElementSet) -> Self {
        ElementSet(self.0 | o.0)
    }

    pub fn intersection(self, o: ElementSet) -> Self {
        ElementSet(self.0 & o.0)
    }

    pub fn difference(self, o: ElementSet) -> Self {
        ElementSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: ElementSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn elements(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic comparison of sorted element lists.
    pub fn lex_cmp(self, o: ElementSet) -> std::cmp::Ordering {
        self.elements().cmp(&o.elements())
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elements())
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|e| (e + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct Matroid {
    m: usize,
    rank: usize,
    bases: Vec<ElementSet>,
    rank_table: Vec<u8>,
    flats: Vec<ElementSet>,
    circuits: Vec<ElementSet>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl Matroid {
    /// Builds a matroid from 0-indexed bases, verifying basis exchange.
    pub fn new(m: usize, bases: &[Vec<usize>]) -> Result<Matroid, MatroidError> {
        if m > MAX_GROUND {
            return Err(MatroidError::TooLarge(m));
        }
        let mut sets = Vec::with_capacity(bases.len());
        for b in bases {
            if let Some(&e) = b.iter().find(|&&e| e >= m) {
                return Err(MatroidError::ElementOutOfRange { element: e, m });
            }
            sets.push(ElementSet::from_elements(b));
        }
        Matroid::from_sets(m, sets)
    }

    pub fn from_sets(m: usize, mut sets: Vec<ElementSet>) -> Result<Matroid, MatroidError> {
        if m > MAX_GROUND {
            return Err(MatroidError::TooLarge(m));
        }
        sets.sort_by(|a, b| a.lex_cmp(*b));
        sets.dedup();
        if sets.is_empty() {
            return Err(MatroidError::NoBases);
        }
        if sets.len() > MAX_BASES {
            return Err(MatroidError::TooManyBases(sets.len()));
        }
        if let Some(s) = sets.iter().find(|s| !s.is_subset(ElementSet::full(m))) {
            let e = s.difference(ElementSet::full(m)).iter().next().unwrap_or(m);
            return Err(MatroidError::ElementOutOfRange { element: e, m });
        }
        let rank = sets[0].len();
        if sets.iter().any(|s| s.len() != rank) {
            return Err(MatroidError::NotEquicardinal);
        }
        let lookup: HashSet<ElementSet> = sets.iter().copied().collect();
        for &b1 in &sets {
            for &b2 in &sets {
                for e in b1.difference(b2).iter() {
                    let ok = b2.difference(b1).iter().any(|f| lookup.contains(&b1.without(e).with(f)));
                    if !ok {
                        return Err(MatroidError::ExchangeViolation { b1, b2, e });
                    }
                }
            }
        }

        let n = 1usize << m;
        let mut indep = vec![false; n];
        for b in &sets {
            indep[b.0 as usize] = true;
        }
        for s in (0..n).rev() {
            if indep[s] {
                let set = ElementSet(s as u32);
                for e in set.iter() {
                    indep[set.without(e).0 as usize] = true;
                }
            }
        }
        let mut rank_table = vec![0u8; n];
        for s in 1..n {
            let set = ElementSet(s as u32);
            rank_table[s] = if indep[s] {
                set.len() as u8
            } else {
                set.iter().map(|e| rank_table[set.without(e).0 as usize]).max().unwrap_or(0)
            };
        }
        let mut mat = Matroid { m, rank, bases: sets, rank_table, flats: Vec::new(), circuits: Vec::new() };
        let mut flats: Vec<ElementSet> = (0..n as u32).map(ElementSet).filter(|&s| mat.closure(s) == s).collect();
        flats.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(*b)));
        let mut circuits: Vec<ElementSet> = (1..n)
            .filter(|&s| !indep[s] && ElementSet(s as u32).iter().all(|e| indep[s & !(1 << e)]))
            .map(|s| ElementSet(s as u32))
            .collect();
        circuits.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(*b)));
        mat.flats = flats;
        mat.circuits = circuits;
        Ok(mat)
    }

    /// The uniform matroid `U_{k,m}`.
    pub fn uniform(k: usize, m: usize) -> Result<Matroid, MatroidError> {
        let bases: Vec<Vec<usize>> = crate::lattice::arith::combinations(m, k);
        Matroid::new(m, &bases)
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.m)
    }

    /// Rank of the matroid.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_of(&self, s: ElementSet) -> usize {
        self.rank_table[s.0 as usize] as usize
    }

    pub fn closure(&self, s: ElementSet) -> ElementSet {
        let r = self.rank_of(s);
        let mut out = s;
        for e in 0..self.m {
            if !s.contains(e) && self.rank_of(s.with(e)) == r {
                out = out.with(e);
            }
        }
        out
    }

    pub fn is_flat(&self, s: ElementSet) -> bool {
        self.closure(s) == s
    }

    pub fn is_independent(&self, s: ElementSet) -> bool {
        self.rank_of(s) == s.len()
    }

    pub fn is_basis(&self, s: ElementSet) -> bool {
        s.len() == self.rank && self.is_independent(s)
    }

    /// Bases in lexicographic order of their sorted element lists.
    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }

    /// All flats ordered by size, then lexicographically.
    pub fn flats(&self) -> &[ElementSet] {
        &self.flats
    }

    pub fn circuits(&self) -> &[ElementSet] {
        &self.circuits
    }

    pub fn loops(&self) -> ElementSet {
        self.closure(ElementSet::EMPTY)
    }

    /// Classes of mutually parallel non-loop elements.
    pub fn parallel_classes(&self) -> Vec<ElementSet> {
        let loops = self.loops();
        let mut seen = ElementSet::EMPTY;
        let mut out = Vec::new();
        for e in 0..self.m {
            if loops.contains(e) || seen.contains(e) {
                continue;
            }
            let class = self.closure(ElementSet::singleton(e)).difference(loops);
            seen = seen.union(class);
            out.push(class);
        }
        out
    }

    /// Convex hull of the basis indicator vectors.
    pub fn matroid_polytope(&self) -> Result<VPolytope, MatroidError> {
        let pts: Vec<RationalVector> = self
            .bases
            .iter()
            .map(|b| RationalVector::from_ints(&(0..self.m).map(|i| b.contains(i) as i64).collect::<Vec<_>>()))
            .collect();
        Ok(VPolytope::hull(self.m, &pts)?)
    }

    pub fn weight(&self, s: ElementSet, w: &[Rational]) -> Rational {
        s.iter().map(|e| w[e].clone()).sum::<Rational>()
    }

    /// A basis of maximal total weight; among ties the lexicographically
    /// smallest.
    pub fn max_weight_basis(&self, w: &[Rational]) -> ElementSet {
        let mut order: Vec<usize> = (0..self.m).collect();
        order.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
        let mut greedy = ElementSet::EMPTY;
        for e in order {
            if self.is_independent(greedy.with(e)) {
                greedy = greedy.with(e);
            }
        }
        let best = self.weight(greedy, w);
        *self
            .bases
            .iter()
            .find(|&&b| self.weight(b, w) == best)
            .expect("greedy basis attains the maximum")
    }

    /// Matroid whose bases are the bases of maximal `w`-weight.
    pub fn initial_matroid(&self, w: &[Rational]) -> Matroid {
        let best = self.bases.iter().map(|&b| self.weight(b, w)).max().unwrap_or_else(Rational::zero);
        let sets: Vec<ElementSet> = self.bases.iter().copied().filter(|&b| self.weight(b, w) == best).collect();
        Matroid::from_sets(self.m, sets).expect("initial matroids satisfy exchange")
    }

    /// The unique circuit in `b ∪ {e}` for a basis `b` and `e ∉ b`.
    pub fn fundamental_circuit(&self, b: ElementSet, e: usize) -> ElementSet {
        let with = b.with(e);
        let mut c = with;
        for f in b.iter() {
            if !self.is_independent(c.without(f)) {
                c = c.without(f);
            }
        }
        c
    }
}
