use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("IC(0) breakdown at row {row}: pivot {pivot}")]
    IcBreakdown { row: usize, pivot: f64 },

    #[error("CG breakdown at iteration {iteration}: p'Ap = {curvature}")]
    CgBreakdown { iteration: usize, curvature: f64 },

    #[error("factor/layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("corrupt CSR cache: {0}")]
    Cache(String),
}
