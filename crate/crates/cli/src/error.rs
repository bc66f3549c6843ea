use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    /// Flag parsing failed, or help/version was requested.
    #[error(transparent)]
    Args(#[from] clap::Error),
    #[error(transparent)]
    Core(#[from] tevo_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    /// A check ran to completion and did not meet its limit.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Args(e) => e.exit_code(),
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
