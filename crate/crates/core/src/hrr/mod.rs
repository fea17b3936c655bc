//! Todd operators, exact interpolation of `z ↦ I(α * 1_{P(z)})` and the
//! Riemann–Roch check `Todd(∂/∂z) I |_{z=0} = χ`.

mod poly;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::chains::{find_strictly_convex, is_convex, is_strictly_convex, support_polytope, ChainError, SupportNumbers};
use crate::lattice::arith::{self, binomial, factorial};
use crate::lattice::{rat, Fan, LatticeError, Rational};
use crate::tropvb::{BundleError, TropicalVectorBundle};

pub use poly::{monomials, MultiPoly};

/// Largest fan dimension accepted by interpolation.
pub const MAX_HRR_DIM: usize = 2;
/// Extra evaluation points checked after interpolation.
pub const CHECK_POINTS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HrrError {
    #[error("interpolation supports fan dimension at most {max}, got {dim}")]
    UnsupportedDimension { dim: usize, max: usize },
    #[error("interpolated polynomial gives {got} at offset {offset:?}, direct evaluation gives {expected}")]
    InterpolationFailure { offset: Vec<i64>, expected: String, got: String },
    #[error("interpolation grid is degenerate")]
    SingularGrid,
    #[error("no convex shift found for virtual volume")]
    NoConvexShift,
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Bernoulli numbers with `B_1 = +1/2`, so that `t/(1 − e^{−t}) = Σ B_k t^k / k!`.
pub fn bernoulli(n: usize) -> Rational {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for k in 1..=n {
        // Σ_{j<k} C(k+1, j) B_j + (k+1) B_k = 0 with B_1 = −1/2.
        let s: Rational = (0..k).map(|j| Rational::from_integer(binomial(k + 1, j)) * &b[j]).sum();
        b.push(-s / rat(k as i64 + 1));
    }
    if n == 1 {
        -b[1].clone()
    } else {
        b[n].clone()
    }
}

/// Coefficients `t_0, …, t_deg` of `t/(1 − e^{−t})`.
pub fn todd_coeffs(deg: usize) -> Vec<Rational> {
    (0..=deg).map(|k| bernoulli(k) / Rational::from_integer(factorial(k))).collect()
}

/// `∏_ρ T(∂/∂z_ρ) p |_{z=0} = Σ_a c_a ∏_ρ t_{a_ρ} a_ρ!`.
pub fn apply_todd(p: &MultiPoly) -> Rational {
    let t = todd_coeffs(p.degree() as usize);
    p.terms()
        .iter()
        .map(|(e, c)| {
            let mut x = c.clone();
            for &k in e {
                x *= &t[k as usize] * Rational::from_integer(factorial(k as usize));
            }
            x
        })
        .sum()
}

/// Value of the volume polynomial of `fan` at possibly non-convex support
/// numbers `g`: `Vol(g + tζ)` is a polynomial in `t` of degree `n`, honest
/// for large `t`, and is extrapolated to `t = 0`.
pub fn virtual_volume(fan: &Fan, g: &SupportNumbers, zeta: &SupportNumbers) -> Result<Rational, HrrError> {
    if is_convex(fan, g) {
        return Ok(support_polytope(fan, g)?.vertex_enumeration()?.volume());
    }
    let n = fan.ambient_dim();
    let mut k = Rational::one();
    for _ in 0..64 {
        if is_convex(fan, &g.add(&zeta.scale(&k))) {
            let ts: Vec<Rational> = (0..=n).map(|j| &k + rat(j as i64)).collect();
            let mut vals = Vec::with_capacity(ts.len());
            for t in &ts {
                vals.push(support_polytope(fan, &g.add(&zeta.scale(t)))?.vertex_enumeration()?.volume());
            }
            return Ok(lagrange_at_zero(&ts, &vals));
        }
        k *= rat(2);
    }
    Err(HrrError::NoConvexShift)
}

fn lagrange_at_zero(ts: &[Rational], vals: &[Rational]) -> Rational {
    let mut out = Rational::zero();
    for j in 0..ts.len() {
        let mut w = vals[j].clone();
        for l in 0..ts.len() {
            if l != j {
                w *= -&ts[l] / (&ts[j] - &ts[l]);
            }
        }
        out += w;
    }
    out
}

/// A strictly convex base point `c = Kζ` deep enough that `P(c + y)` is
/// an honest polytope with the fan as normal fan for all offsets `y` with
/// `|y_ρ| ≤ reach`.
pub fn base_point(fan: &Fan, scale: i64, reach: i64) -> Result<SupportNumbers, HrrError> {
    let zeta = find_strictly_convex(fan)?;
    let s = fan.rays().len();
    let mut k = rat(scale.max(1));
    for _ in 0..32 {
        let c = zeta.scale(&k);
        // Corner offsets of the cube of radius `reach` suffice since strict
        // convexity is cut out by linear inequalities.
        let ok = (0..1usize << s.min(16)).all(|mask| {
            let y: Vec<i64> = (0..s).map(|i| if mask >> i & 1 == 1 { reach } else { -reach }).collect();
            is_strictly_convex(fan, &c.add(&SupportNumbers::from_ints(&y)))
        });
        if ok {
            return Ok(c);
        }
        k *= rat(2);
    }
    Err(ChainError::NoStrictlyConvex.into())
}

/// Interpolation nodes: offsets `y ≥ 0` with `|y| ≤ n`.
fn grid(nvars: usize, deg: u32) -> Vec<Vec<i64>> {
    monomials(nvars, deg).into_iter().map(|e| e.into_iter().map(i64::from).collect()).collect()
}

/// Deterministic off-grid offsets of total degree above `deg`.
fn check_offsets(nvars: usize, deg: u32) -> Vec<Vec<i64>> {
    (0..CHECK_POINTS as i64)
        .map(|k| (0..nvars as i64).map(|i| ((k + 2) * (i + 1) + k) % (deg as i64 + 3) - 1).collect::<Vec<i64>>())
        .map(|mut y| {
            if y.iter().sum::<i64>() <= deg as i64 {
                y[0] += deg as i64 + 1;
            }
            y
        })
        .collect()
}

/// Interpolates `z ↦ eval(z)` as a polynomial of degree at most the fan
/// dimension, sampled at `z = c + y` around a deep base point and
/// recentered to absolute coordinates.
pub fn interpolate_on_fan(
    fan: &Fan,
    scale: i64,
    eval: impl Fn(&SupportNumbers) -> Result<Rational, HrrError> + Sync,
) -> Result<MultiPoly, HrrError> {
    let n = fan.ambient_dim();
    if n > MAX_HRR_DIM {
        return Err(HrrError::UnsupportedDimension { dim: n, max: MAX_HRR_DIM });
    }
    let s = fan.rays().len();
    let deg = n as u32;
    let nodes = grid(s, deg);
    let checks = check_offsets(s, deg);
    let reach = checks.iter().flatten().map(|x| x.abs()).max().unwrap_or(0).max(deg as i64);
    let c = base_point(fan, scale, reach)?;
    let at = |y: &[i64]| eval(&c.add(&SupportNumbers::from_ints(y)));
    let values: Vec<Rational> = nodes.par_iter().map(|y| at(y)).collect::<Result<_, _>>()?;
    let monos = monomials(s, deg);
    let rows: Vec<Vec<Rational>> = nodes
        .iter()
        .map(|y| {
            monos
                .iter()
                .map(|e| {
                    let p: i64 = y.iter().zip(e).map(|(&b, &k)| b.pow(k)).product();
                    rat(p)
                })
                .collect()
        })
        .collect();
    let coeffs = arith::solve_unique(&rows, &values, monos.len()).ok_or(HrrError::SingularGrid)?;
    let local = MultiPoly::from_terms(s, monos.into_iter().zip(coeffs));
    for y in &checks {
        let expected = at(y)?;
        let got = local.eval(&arith::lift_i64(y));
        if got != expected {
            return Err(HrrError::InterpolationFailure {
                offset: y.clone(),
                expected: arith::format_pq(&expected),
                got: arith::format_pq(&got),
            });
        }
    }
    let neg_c: Vec<Rational> = c.0.iter().map(|x| -x).collect();
    Ok(local.shift(&neg_c))
}

fn max_abs_entry(e: &TropicalVectorBundle) -> i64 {
    e.diagram().rows().iter().flatten().map(|x| x.abs()).max().unwrap_or(0).max(1)
}

/// The polynomial `z ↦ I(α_E * 1_{P(z)}) = Σ_i Vol(P(h_i + Λz))` in the
/// support numbers of the bundle's fan, where `h_i` are the one-valued
/// branches and `Λ` lifts to their common refinement.
pub fn interpolate_i(e: &TropicalVectorBundle) -> Result<MultiPoly, HrrError> {
    let dec = e.branch_decomposition()?;
    let zeta = dec.strictly_convex_numbers()?;
    let n = e.fan().ambient_dim() as i64;
    let scale = 3 * (n + 1) * max_abs_entry(e);
    interpolate_on_fan(e.fan(), scale, |z| {
        let lifted = dec.lift(z)?;
        let mut total = Rational::zero();
        for h in dec.branches() {
            total += virtual_volume(dec.fan(), &h.add(&lifted), &zeta)?;
        }
        Ok(total)
    })
}

/// The volume polynomial `z ↦ Vol(P(z0 + z))` of the fan.
pub fn interpolate_polytope(fan: &Fan, z0: &SupportNumbers) -> Result<MultiPoly, HrrError> {
    let zeta = find_strictly_convex(fan)?;
    let scale = z0.0.iter().map(|x| x.abs().ceil().to_integer()).max().map_or(1, |m| {
        num_traits::ToPrimitive::to_i64(&m).unwrap_or(i64::MAX / 8).saturating_add(1)
    });
    let p = interpolate_on_fan(fan, 3 * (fan.ambient_dim() as i64 + 1) * scale, |z| {
        virtual_volume(fan, &z0.add(z), &zeta)
    })?;
    Ok(p)
}

/// Result of the Riemann–Roch comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HrrReport {
    pub lhs: Rational,
    pub rhs: i64,
    pub equal: bool,
    pub polynomial: MultiPoly,
}

pub fn hrr_verify(e: &TropicalVectorBundle) -> Result<HrrReport, HrrError> {
    let polynomial = interpolate_i(e)?;
    let lhs = apply_todd(&polynomial);
    let rhs = e.euler_char_total()?;
    let equal = lhs == rat(rhs);
    Ok(HrrReport { lhs, rhs, equal, polynomial })
}
