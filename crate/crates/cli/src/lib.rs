//! Command-line front end for quantum threshold secret sharing.

pub mod commands;
pub mod format;

use thiserror::Error;

/// Exit code of a successful run.
pub const EXIT_OK: u8 = 0;
/// A reconstruction or verification did not meet its tolerance.
pub const EXIT_FAILED: u8 = 1;
/// Malformed flags, files or amplitudes.
pub const EXIT_USAGE: u8 = 2;
/// Parameters that no scheme can satisfy.
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Violation(_) => EXIT_VIOLATION,
        }
    }
}

impl From<qss_core::Error> for CliError {
    fn from(e: qss_core::Error) -> Self {
        use qss_core::Error::*;
        match e {
            NoCloningViolation { .. }
            | ThresholdFloor(_)
            | ParamViolation(_)
            | NotPureScheme { .. }
            | TooLarge { .. } => CliError::Violation(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
