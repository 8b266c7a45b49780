use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid or incomplete configuration.
    #[error("config: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Core(#[from] qgv_core::Error),
}

/// Exit code for a run that stopped on an error; axiom failures are reported
/// separately with code 1.
pub const ERROR_EXIT: i32 = 2;
