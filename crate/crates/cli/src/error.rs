use std::path::Path;

use modefir::Error;

/// Failures, split by the exit code they map to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input, bad arguments. Exit 2.
    #[error("{0}")]
    Input(String),
    /// The decomposition itself failed. Exit 3.
    #[error("{0}")]
    Engine(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Engine(_) => 3,
        }
    }

    /// Sorts a library error: rejected inputs and settings are input errors.
    pub fn from_core(e: Error) -> Self {
        match e {
            Error::EmptySignal
            | Error::NonFiniteSample { .. }
            | Error::InvalidConfig(_)
            | Error::InvalidSpec(_) => CliError::Input(e.to_string()),
            _ => CliError::Engine(e.to_string()),
        }
    }

    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }
}
