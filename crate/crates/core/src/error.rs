use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: &'static str },

    #[error("argument `{name}` = {value} outside the admissible domain")]
    Domain { name: &'static str, value: f64 },

    #[error("quadrature did not converge: estimated error {achieved:e} exceeds tolerance {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("series did not reach tolerance {tol:e} within {terms} terms")]
    Series { terms: usize, tol: f64 },

    #[error("iteration failed to reach tolerance: {0}")]
    Convergence(&'static str),

    #[error("recursion depth {depth} exceeds configured cap {cap}")]
    DepthExceeded { depth: usize, cap: usize },

    #[error("signal covers [{start}, {end}] but [0, {required}] is required")]
    Coverage { start: f64, end: f64, required: f64 },

    #[error("mesh misalignment: {0}")]
    Mesh(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { name, value })
    }
}
