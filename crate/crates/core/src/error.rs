use thiserror::Error;

/// Errors raised by tubal-tensor operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TubalError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("operands use different transforms")]
    TransformMismatch,

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    /// The operation needs `L = cW` (DFT or scaled unitary).
    #[error("operation requires a scaled-unitary transform (L = cW)")]
    UnsupportedTransform,

    #[error("input contains non-finite entries")]
    NonFinite,

    #[error("mode {mode} out of range for a tubal tensor of order {order}")]
    ModeOutOfRange { mode: usize, order: usize },

    #[error("truncation rank {rank} out of range for mode {mode} of size {size}")]
    RankOutOfRange { mode: usize, rank: usize, size: usize },

    #[error("invalid processing order: {0}")]
    InvalidPermutation(String),

    #[error("imaginary residual {residual:e} too large for a real result of norm {norm:e}")]
    ImaginaryResidual { residual: f64, norm: f64 },
}

pub type Result<T> = std::result::Result<T, TubalError>;
