use thiserror::Error;

/// Errors raised by the model, the solvers, and the file layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shift {shift} for voter {voter} is outside the cost domain 0..={max}")]
    ShiftOutOfRange { voter: usize, shift: usize, max: usize },

    #[error("{algorithm}: precondition violated: {reason}")]
    Precondition {
        algorithm: &'static str,
        reason: String,
    },

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid deletion set: {0}")]
    InvalidDeletionSet(String),

    #[error("invalid reduction parameters: {0}")]
    Reduction(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal solver error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(algorithm: &'static str, reason: impl Into<String>) -> Error {
    Error::Precondition {
        algorithm,
        reason: reason.into(),
    }
}
