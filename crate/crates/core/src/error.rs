use thiserror::Error;

/// Errors signalled by the engine. Verification failures are not errors;
/// they come back as verdicts.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{what} {value} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("invalid structure choice: {0}")]
    InvalidChoice(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("input lies outside the recognition hypotheses: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
