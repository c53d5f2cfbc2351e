use thiserror::Error;

/// Errors raised by the symbolic and numeric modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible symbol kinds: {0}")]
    Kind(String),
    #[error("truncation weight {have} is insufficient, need at least {need}")]
    Truncation { have: u32, need: u32 },
    #[error("leading symbol is not invertible: {0}")]
    NotElliptic(String),
    #[error("symbol is not radial at the chart center: {0}")]
    NonRadial(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("kernel evaluated at a singular point: {0}")]
    Singular(String),
    #[error("least-squares design matrix is rank deficient (condition number {condition:.3e})")]
    RankDeficient { condition: f64 },
    #[error("linear solver failed: {0}")]
    Solver(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
