use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] aapt_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("state is not faithful: |det(tau)| = {det_abs:e} <= {tol:e}")]
    Unfaithful { det_abs: f64, tol: f64 },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 2 for an unfaithful input state, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unfaithful { .. } => 2,
            _ => 1,
        }
    }
}
