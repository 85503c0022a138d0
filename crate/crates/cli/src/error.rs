use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] plr_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{module}: request refused: {reason}")]
    Infeasible { module: &'static str, reason: String },
    #[error("{0}")]
    Format(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn infeasible(module: &'static str, reason: impl Into<String>) -> Self {
        CliError::Infeasible { module, reason: reason.into() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
