use thiserror::Error;

/// Command failure, mapped to the documented process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub const EXIT_OK: i32 = 0;
    pub const EXIT_IO: i32 = 1;
    pub const EXIT_INPUT: i32 = 2;
    pub const EXIT_VERIFY: i32 = 3;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => Self::EXIT_INPUT,
            CliError::Verification(_) => Self::EXIT_VERIFY,
            CliError::Io(_) => Self::EXIT_IO,
        }
    }
}
