//! Exact Ehrhart theory for tropical vector bundles on toric varieties.
//!
//! All arithmetic is exact: lattice vectors are `i64`, everything else is
//! an arbitrary-precision rational.

pub mod catalog;
pub mod chains;
pub mod hrr;
pub mod lattice;
pub mod matroid;
pub mod taut;
pub mod tropvb;

use thiserror::Error;

/// Any error raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Matroid(#[from] matroid::MatroidError),
    #[error(transparent)]
    Chain(#[from] chains::ChainError),
    #[error(transparent)]
    Bundle(#[from] tropvb::BundleError),
    #[error(transparent)]
    Hrr(#[from] hrr::HrrError),
    #[error(transparent)]
    Taut(#[from] taut::TautError),
}
