use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Args(#[from] clap::Error),
    #[error("invalid {what}: {reason}")]
    Usage { what: &'static str, reason: String },
    #[error(transparent)]
    Model(#[from] ar1_tstat::Error),
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed manifest {}: {source}", path.display())]
    Manifest { path: PathBuf, source: serde_json::Error },
    #[error("serialisation failed: {0}")]
    Serialise(String),
}

impl CliError {
    pub fn usage(what: &'static str, reason: impl Into<String>) -> Self {
        CliError::Usage {
            what,
            reason: reason.into(),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Serialise(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Serialise(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
