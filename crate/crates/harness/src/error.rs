use thiserror::Error;

use crate::dsl::Diagnostic;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Parse(#[from] Diagnostic),
    #[error(transparent)]
    Graph(#[from] bei_core::Error),
    #[error(transparent)]
    Algebra(#[from] bei_algebra::AlgebraError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
