//! Library behind the `nicepair` binary: argument types, report
//! serialization (JSON, CSV, text), and the command handlers. Kept as a
//! library so the serialization round-trips are unit-testable.

pub mod args;
pub mod commands;
pub mod report;

/// CLI failure classes, mapped to exit codes by `main`.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: violated precondition, unreadable file, malformed token.
    /// Exit code 2.
    Validation(String),
    /// Unexpected internal failure. Exit code 1.
    Internal(String),
    /// The verify suite ran and at least one criterion failed. Exit code 1.
    VerifyFailed,
}

impl From<nicepair_core::Error> for CliError {
    fn from(err: nicepair_core::Error) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Internal(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Internal(err.to_string())
    }
}
