//! Lattices, cones, fans and polytopes with exact arithmetic.

pub mod arith;
pub mod boxes;
pub mod cone;
pub mod dd;
pub mod fan;
pub mod polytope;

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub use arith::{rat, rat_frac, Rational};
pub use boxes::LatticeBox;
pub use cone::Cone;
pub use fan::{Fan, FanCone};
pub use polytope::{Face, Halfspace, HPolyhedron, VPolytope};

/// Largest ambient dimension accepted by vertex enumeration.
pub const MAX_VERTEX_DIM: usize = 4;
/// Largest ambient dimension accepted by hyperplane refinement.
pub const MAX_REFINE_DIM: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("{op} supports ambient dimension at most {max}, got {dim}")]
    UnsupportedDimension { op: &'static str, dim: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("point is not in the support of the fan")]
    NotInSupport,
    #[error("zero vector cannot generate a ray")]
    ZeroVector,
    #[error("cone {0:?} contains a line")]
    NotStrictlyConvex(Vec<usize>),
    #[error("not a fan: {0}")]
    NotAFan(String),
    #[error("integer overflow converting to 64-bit lattice coordinates")]
    Overflow,
}

/// Integer point of `N` or `M`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Divides out the gcd of the coordinates; signs are kept.
    pub fn primitive(&self) -> Self {
        LatticeVector(arith::primitive_i64(&self.0))
    }

    pub fn pairing(&self, other: &LatticeVector) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &LatticeVector) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(arith::lift_i64(&self.0))
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

impl From<&[i64]> for LatticeVector {
    fn from(v: &[i64]) -> Self {
        LatticeVector(v.to_vec())
    }
}

/// Rational point of `N_R` or `M_R`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalVector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        RationalVector(vec![Rational::zero(); dim])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RationalVector(arith::lift_i64(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn pairing_lattice(&self, v: &LatticeVector) -> Rational {
        self.0
            .iter()
            .zip(&v.0)
            .filter(|(_, &b)| b != 0)
            .map(|(a, &b)| a * Rational::from_integer(b.into()))
            .sum()
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        arith::dot_rat(&self.0, &other.0)
    }

    pub fn add(&self, other: &RationalVector) -> Self {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> Self {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RationalVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// Integer coordinates when every entry is integral and fits in `i64`.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.0
            .iter()
            .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
            .collect::<Option<Vec<_>>>()
            .map(LatticeVector)
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl From<&LatticeVector> for RationalVector {
    fn from(v: &LatticeVector) -> Self {
        v.to_rational()
    }
}
