use thiserror::Error;

/// Errors raised by the matrix kernel and the semi-Hilbert layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.6e})")]
    NotPsd { min_eig: f64 },

    #[error("weight matrix is numerically zero")]
    ZeroWeight,

    #[error("operator does not admit an A-adjoint (membership residual {residual:.6e})")]
    NotAAdjointable { residual: f64 },

    #[error("operator is not A-bounded (membership residual {residual:.6e})")]
    NotABounded { residual: f64 },

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("all oracle samples rejected: weight is numerically zero on the sample set")]
    DegenerateContext,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
