//! Batch front end for `casimir-core`.
//!
//! A run is one task, a TOML configuration carrying its parameters and an
//! optional sweep, and a CSV or JSON artifact. See [`tasks::registry`] for
//! the task list and [`spectrum`] for the eigenvalue import format.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod config;
pub mod output;
pub mod spectrum;
pub mod tasks;

use thiserror::Error;

/// Process exit code for configuration and input errors.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit code for numerical failures (non-convergence, truncation).
pub const EXIT_NUMERICAL: i32 = 3;
/// Process exit code when the acceptance outcome differs from the expected set.
pub const EXIT_ACCEPTANCE: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Numerical(casimir_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<casimir_core::Error> for CliError {
    fn from(e: casimir_core::Error) -> Self {
        use casimir_core::Error as E;
        match e {
            // Inputs the core rejects are configuration problems.
            E::Domain(m) => CliError::Config(format!("invalid parameter: {m}")),
            E::Unsupported(m) => CliError::Config(format!("unsupported request: {m}")),
            E::NotDiagonalizable(m) => CliError::Config(format!("invalid parameter: {m}")),
            other => CliError::Numerical(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
