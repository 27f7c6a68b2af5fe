use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("config key `{key}`: {message}")]
    Key { key: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Numeric(#[from] friedrichs_lab::Error),
}

impl CliError {
    pub fn key(key: &str, message: impl Into<String>) -> Self {
        CliError::Key {
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad input, 3 for I/O, 4 for numerical failures. 1 is reserved for failed checks.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Key { .. } => ExitCode::from(2),
            CliError::Numeric(friedrichs_lab::Error::Domain { .. }) => ExitCode::from(2),
            CliError::Io { .. } => ExitCode::from(3),
            CliError::Numeric(_) => ExitCode::from(4),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
