use thiserror::Error;

use crate::algebra::UnsupportedReason;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not self-adjoint (residual {residual:e})")]
    NotSelfAdjoint { residual: f64 },
    #[error("operator norm {norm} exceeds 1")]
    NormExceedsOne { norm: f64 },
    #[error("matrix is not trace-zero (normalized trace modulus {trace:e})")]
    NotTraceZero { trace: f64 },
    #[error("dimension {dim} is odd; an even dimension is required")]
    OddDimension { dim: usize },
    #[error("piece-diagonal blocks are not zero (residual {residual:e})")]
    PieceDiagonalNotZero { residual: f64 },
    #[error("at least two pieces are required")]
    SinglePiece,
    #[error("invalid piece partition: {size} x {count} does not cover dimension {n}")]
    BadPartition { n: usize, size: usize, count: usize },
    #[error("dimension {n} is not divisible by 4")]
    NotDivisibleBy4 { n: usize },
    #[error("matrix diagonal is not zero (residual {residual:e})")]
    DiagonalNotZero { residual: f64 },
    #[error("unsupported configuration: {0}")]
    Unsupported(UnsupportedReason),
    #[error("position ({s}, {t}) is outside a {k} x {k} amplification")]
    BadPosition { s: usize, t: usize, k: usize },
    #[error("padding matrix is not unitary (residual {residual:e})")]
    PaddingNotUnitary { residual: f64 },
    #[error("matrix is not in the orthogonal complement (membership residual {residual:e})")]
    NotInComplement { residual: f64 },
    #[error("invalid subalgebra description: {0}")]
    InvalidSpec(String),
    #[error("empty matrix list")]
    EmptyList,
}
