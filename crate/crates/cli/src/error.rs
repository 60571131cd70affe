use thiserror::Error;

use crate::instance::SpecError;

/// Exit codes: 0 success, 1 mathematical or certification failure, 2 usage.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<baker_kit::Error> for CliError {
    fn from(e: baker_kit::Error) -> Self {
        match e {
            baker_kit::Error::InvalidInput(msg) => CliError::Usage(msg),
            other => CliError::Math(other.to_string()),
        }
    }
}
