use thiserror::Error;

/// Errors produced by the numerical and exact routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: argument {0} is a non-positive integer")]
    Pole(String),
    #[error("point {0} lies on the branch cut [1, +inf)")]
    Slit(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("argument outside the supported domain: {0}")]
    Domain(String),
    #[error("series did not converge after {terms} terms")]
    NonConvergence { terms: usize },
    #[error("sequence too short: need {needed} values, have {have}")]
    InsufficientLength { needed: usize, have: usize },
    #[error("sequence is not totally monotone: {0}")]
    Inconsistent(String),
    #[error("continued fraction denominator vanished at depth {depth}")]
    NearZeroDenominator { depth: usize },
    #[error("quadrature did not converge: levels differ by {difference:e} > {tolerance:e}")]
    QuadratureNonConvergence { difference: f64, tolerance: f64 },
    #[error("2F1({0}) is not in class T")]
    NotInT(String),
}

impl Error {
    /// True for failures of a numerical method, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::NearZeroDenominator { .. }
                | Error::QuadratureNonConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
