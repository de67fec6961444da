//! Errors of the front end and their process exit codes.

use std::path::PathBuf;

use thiserror::Error;

/// A configuration problem tied to a line of the config file, or to line 0
/// for values that only fail once combined.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("invalid option: {0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },

    #[error("input data: {0}")]
    Data(String),

    #[error("numerical failure: {0}")]
    Numerical(cilia_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for configuration and usage, 3 for input data, 4 for numerical
    /// failures. Output write failures count as input-data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Input { .. } | CliError::Data(_) | CliError::Io { .. } => 3,
            CliError::Numerical(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<cilia_core::Error> for CliError {
    fn from(e: cilia_core::Error) -> Self {
        use cilia_core::Error as E;
        match e {
            E::Coverage { .. } => CliError::Data(e.to_string()),
            E::Domain { .. } | E::InvalidArgument { .. } | E::Mesh(_) => CliError::Config(ConfigError::new(0, e.to_string())),
            E::Quadrature { .. } | E::Series { .. } | E::Convergence(_) | E::DepthExceeded { .. } => {
                CliError::Numerical(e)
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
