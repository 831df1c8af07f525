use std::fmt;

use thz_channel::ModelError;

/// Failure classes with distinct process exit codes, so scripts can tell a
/// bad invocation (2) from bad input data (3) from a numerical breakdown (4).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(err: ModelError) -> Self {
        match err {
            // The data on disk is structurally fine but cannot support the
            // requested estimate; surface the estimator's message verbatim.
            ModelError::Unidentifiable { .. } | ModelError::InvalidInput(_) => {
                CliError::Data(err.to_string())
            }
            ModelError::Domain(_)
            | ModelError::NonConvergence { .. }
            | ModelError::AccuracyLoss { .. } => CliError::Numeric(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Usage error pointing at the flag whose value made a constructor reject.
pub fn flag_error(flag: &str, err: ModelError) -> CliError {
    CliError::Usage(format!("{flag}: {err}"))
}
