//! Harness failures mapped onto process exit codes.

use thiserror::Error;

/// Everything the harness can report to a caller.  The three variants are
/// exactly the three nonzero exit classes of the binary.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed invocation: bad grammar, unknown model, operation, preset,
    /// or parameter, an invalid grid, a duplicate binding.
    #[error("usage: {0}")]
    Usage(String),
    /// A model rejected its inputs while strict mode was on, or a post-run
    /// fit had nothing valid to work with.
    #[error("domain: {0}")]
    Domain(String),
    /// The output could not be written.
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    /// Exit code contract: usage 2, domain 3, I/O 4 (success is 0).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
