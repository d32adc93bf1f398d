use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] depref::Error),
    #[error("{0} criteria failed")]
    VerificationFailed(usize),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Model(depref::Error::Parameter(_) | depref::Error::Domain(_)) => 2,
            CliError::Model(_) => 1,
            CliError::Io { .. } => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
