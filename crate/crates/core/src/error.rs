use thiserror::Error;

/// Failure modes shared by every numeric routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at x = {0}")]
    Pole(f64),

    #[error("{what} did not converge after {iterations} iterations (best bracket [{lo:e}, {hi:e}])")]
    Convergence {
        what: &'static str,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("quadrature on [{lo:e}, {hi:e}] stopped with error estimate {estimate:e} above tolerance {tolerance:e}")]
    Quadrature {
        lo: f64,
        hi: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("series truncated after {terms} terms with tail estimate {tail:e}")]
    Truncation { terms: usize, tail: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by a numeric primitive failing to converge,
    /// as opposed to invalid input.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::Quadrature { .. } | Error::Truncation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
