use thiserror::Error;

use crate::divisor::Space;
use crate::model::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("namespace mismatch: {left} vs {right}")]
    NamespaceMismatch { left: Space, right: Space },

    #[error("invalid model: {}", format_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("unknown divisor {0:?}")]
    UnknownDivisor(String),

    #[error("divisor {0:?} is the strict transform of Y; its self-restriction is not modeled")]
    ContainsStrictTransform(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("intersection matrix is singular")]
    SingularMatrix,

    #[error("intersection matrix is not negative definite (leading minor {0} has the wrong sign)")]
    NotNegativeDefinite(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("boundary is not effective: {0}")]
    NonEffectiveBoundary(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inconsistent chart data: {0}")]
    InvalidChart(String),

    #[error("invalid Ohsawa setup: {0}")]
    InvalidSetup(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
