use std::path::Path;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const RESIDUAL_FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INVARIANT: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed input file; the message carries the line and column.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Io(String),
    /// Input or flag violates a precondition.
    #[error("{0}")]
    Invariant(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io(_) => exit::PARSE,
            CliError::Invariant(_) => exit::INVARIANT,
            CliError::Numerical(_) => exit::NUMERICAL,
        }
    }

    pub(crate) fn parse(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Parse {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub(crate) fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<charmat_core::Error> for CliError {
    fn from(e: charmat_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Invariant(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
