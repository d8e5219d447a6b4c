use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("logarithmic pole: {0}")]
    Pole(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate}, error bound {abs_error:e})"
    )]
    NonConvergence {
        estimate: Complex64,
        abs_error: f64,
        subdivisions: usize,
        evaluations: usize,
    },

    #[error("inner integral failed at outer point {outer}: {source}")]
    Inner { outer: f64, source: Box<Error> },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    /// True for failures of the integration engine (as opposed to bad input).
    pub fn is_quadrature_failure(&self) -> bool {
        match self {
            Error::NonConvergence { .. } | Error::NonFinite(_) | Error::Inner { .. } => true,
            Error::InvalidParameter { .. } | Error::Pole(_) => false,
        }
    }
}
