use thiserror::Error;

/// Errors raised by validation and evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A probability vector or joint distribution violates an invariant.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// The entropic index or another scalar parameter is out of range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Conditioning on an outcome that carries no probability mass.
    #[error("conditioning on row {row} with zero marginal mass")]
    NullConditioning { row: usize },

    /// A matrix is not a valid density matrix (or not Hermitian).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Shapes that do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A root solve whose endpoints do not bracket a sign change.
    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    /// Malformed JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
