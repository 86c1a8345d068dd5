use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    #[error("invalid simplicial data: {0}")]
    InvalidSimplicial(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("chain map does not commute with differentials at degree {degree}: {detail}")]
    NotChainMap { degree: i64, detail: String },

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("cutoff {cutoff} too small: degree {degree} needs cutoff >= {needed}")]
    CutoffTooSmall {
        cutoff: usize,
        degree: i64,
        needed: usize,
    },

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("coefficient mismatch: {0}")]
    CoefficientMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
