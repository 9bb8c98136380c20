use std::fmt;
use std::process::ExitCode;

/// Failures of a CLI invocation, each tied to one exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config values or unusable files (exit 1).
    Usage(String),
    /// A check or comparison did not pass (exit 2).
    Validation(String),
    /// A simulator cap was exceeded (exit 3).
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Cap(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
            CliError::Cap(m) => write!(f, "resource cap exceeded: {m}"),
        }
    }
}

impl From<rmdc::Error> for CliError {
    fn from(e: rmdc::Error) -> Self {
        match e {
            rmdc::Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("json: {e}"))
    }
}
