//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomials use different indeterminates: {0} vs {1}")]
    VarMismatch(&'static str, &'static str),

    #[error("series truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("series exponential requires zero constant term, got {0}")]
    NonzeroConstantTerm(String),

    #[error("series composition requires inner series with zero constant term, got {0}")]
    NonzeroInnerConstant(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRat(String),

    #[error("unknown identifier: {0}")]
    UnknownId(String),

    #[error("generating-function spec needs a block index k for kind {0}")]
    MissingK(&'static str),

    #[error("truncation order {0} exceeds the cap {1}")]
    OrderTooLarge(usize, usize),

    #[error("Poisson rate {0} out of range (must be in (0, {1}])")]
    RateOutOfRange(f64, f64),

    #[error("spec rate {spec} disagrees with alpha/m = {expected}")]
    RateMismatch { spec: f64, expected: f64 },

    #[error("moment order n = {0} too large for the tolerance budget (max {1}); increase n_samples and call the low-level estimator")]
    MomentOrderTooLarge(usize, usize),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
