//! Command-line front end for shiftlab: record parsing, JSON/CSV/SVG
//! emission and reproduction scripts checked against golden files.

pub mod commands;
pub mod format;
pub mod report;
pub mod repro;
pub mod svg;

use std::path::PathBuf;

pub use commands::{run, Cli, JobConfig};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => exit::IO,
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Numerical(_) => exit::NUMERICAL,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<shiftlab::Error> for CliError {
    fn from(e: shiftlab::Error) -> Self {
        use shiftlab::Error as E;
        match e {
            E::DegenerateBasis | E::Consistency(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
