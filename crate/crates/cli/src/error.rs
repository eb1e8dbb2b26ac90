use thiserror::Error;

/// Failures surfaced to the user, split by the exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Input could not be read or parsed (exit code 2).
    #[error("{0}")]
    Parse(String),
    /// Input parsed but does not describe a usable state or request (exit code 3).
    #[error("{0}")]
    Semantic(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Semantic(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<entangle_core::Error> for CliError {
    fn from(e: entangle_core::Error) -> Self {
        CliError::Semantic(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

pub fn semantic_err(msg: impl Into<String>) -> CliError {
    CliError::Semantic(msg.into())
}
