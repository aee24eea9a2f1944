use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numeric(unruh_core::Error),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("frozen set differs from the boundary prediction: {0}")]
    FrozenMismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Io { .. } => 3,
            CliError::FrozenMismatch(_) => 4,
        }
    }

    /// Core errors raised while checking user input: domain violations are
    /// usage errors, anything else is numerical.
    pub fn from_input(e: unruh_core::Error) -> Self {
        match e {
            unruh_core::Error::Domain { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}
