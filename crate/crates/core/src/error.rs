use thiserror::Error;

/// Errors surfaced by the analysis and placement routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not diagonalizable (eigenvector matrix condition number {condition:.3e})")]
    NotDiagonalizable { condition: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical degeneracy: {message} (condition number {condition:.3e})")]
    NumericalDegeneracy { message: String, condition: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
