use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("insufficient grid: need at least {needed} points, got {got}")]
    InsufficientGrid { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty sampling region: {0}")]
    EmptyRegion(String),
    #[error("unknown extension {0:?} (expected tapered or product_bump)")]
    UnknownExtension(String),
    #[error(transparent)]
    Core(#[from] pairsing_core::Error),
}

pub type Result<T, E = NumericError> = std::result::Result<T, E>;
