//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of an operation (bad degree, zero torus
    /// coordinate, parameter out of range, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical procedure failed to converge or produced an inconsistent
    /// value (root finder breakdown, contraction not converged, ...).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// An internal invariant was violated. These indicate bugs, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
    /// Malformed textual input (CSV rows, JSON polynomials, config files).
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
