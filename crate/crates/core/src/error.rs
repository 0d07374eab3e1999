use thiserror::Error;

use crate::lie::AlgebraName;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group closure produced {found} elements, expected {expected}")]
    GroupClosure { found: usize, expected: usize },

    #[error("{what} is not integral (value {value})")]
    NonIntegral { what: &'static str, value: f64 },

    #[error("modulus must be positive, got {0}")]
    InvalidModulus(i64),

    #[error("weight {weight:?} is outside the admissible cone of the {family} family")]
    WeightOutsideCone { weight: [i64; 3], family: String },

    #[error("no explicit expansion for the {family} family of {algebra}")]
    UnsupportedExplicit { algebra: AlgebraName, family: String },

    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("field metadata mismatch: {0}")]
    Metadata(String),

    #[error("invalid bump parameters: need beta > alpha > 0 (alpha = {alpha}, beta = {beta})")]
    InvalidBump { alpha: f64, beta: f64 },

    #[error("reduction to the fundamental domain did not converge after {0} steps")]
    ReductionDiverged(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
