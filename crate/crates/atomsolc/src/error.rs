//! Error type of the command-line layer, carrying the process exit code.

use thiserror::Error;

/// Everything that can go wrong between parsing the arguments and writing
/// the artifacts, bucketed by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// The request itself is unusable: contradictory flags, out-of-range
    /// parameters, a subcommand that needs an output path without one.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The computation or an artifact's content is inconsistent: closed
    /// forms disagreeing with the oracle, a requested peak that does not
    /// exist, a validated file diverging from its own recomputation.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    /// The file system said no.
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit code: 2 = invalid config, 3 = inconsistency, 4 = I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<atomsolc_core::Error> for CliError {
    fn from(e: atomsolc_core::Error) -> Self {
        use atomsolc_core::Error::*;
        match e {
            InvalidParameter(_) | DegenerateParameters(_) | Unsupported(_) => {
                CliError::Config(e.to_string())
            }
            InternalConsistency(_) | PeakNotFound(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
