use thiserror::Error;

use crate::set::Subset;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} is already in {set}")]
    ElementPresent { element: usize, set: Subset },

    #[error("element {element} is outside the ground set of size {dim}")]
    ElementOutOfRange { element: usize, dim: usize },

    #[error("ground set mismatch: expected d = {expected}, got d = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ground set of size {dim} exceeds the limit of {limit} for this operation")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("operation requires a deterministic oracle")]
    StochasticOracle,

    #[error("function is not {direction}: marginal of element {element} at {set} is {marginal}")]
    NotMonotone {
        direction: &'static str,
        element: usize,
        set: Subset,
        marginal: f64,
    },

    #[error("every marginal gain is zero")]
    Degenerate,

    #[error("function is not normalized: H(empty) = {0}")]
    NotNormalized(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not positive definite (pivot {pivot} = {value})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("every trajectory term has a zero denominator")]
    AllTermsDegenerate,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no free (non-terminal) nodes")]
    NoFreeNodes,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Errors that stem from user input rather than a failed solve.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_) | Error::Parse { .. } | Error::Io(_) | Error::Json(_)
        )
    }
}
