//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the numerical routines.
///
/// Validation problems (bad orders, exponents outside the admissible range)
/// are separated from numerical ones (non-convergence, divergence) so that
/// callers such as the command-line front end can map them to distinct exit
/// codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    Domain(String),
    /// Gamma was evaluated at a non-positive integer.
    #[error("gamma has a pole at {0}")]
    Pole(f64),
    /// An integral or norm is infinite for the given function.
    #[error("divergent: {0}")]
    Divergence(String),
    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge on [{a}, {b}]: estimated error {err:e} after {subdivisions} subdivisions")]
    NonConvergence {
        a: f64,
        b: f64,
        err: f64,
        subdivisions: usize,
    },
    /// A root-finder could not bracket a sign change.
    #[error("no sign change: {0}")]
    Bracket(String),
    /// A monotonicity property that a solver relies on was observed to fail.
    #[error("monotonicity violated: {0}")]
    Monotonicity(String),
    /// The requested combination of parameters is not in the catalog.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Reading input or writing output failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by invalid user input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Pole(_) | Error::Unsupported(_))
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
