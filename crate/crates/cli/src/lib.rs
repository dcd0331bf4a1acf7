//! Argument handling and subcommands of the `specidx` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
mod output;

use thiserror::Error;

pub use args::{Cli, Command};
pub use config::RunConfig;

/// Exit status for invalid input or configuration.
pub const EXIT_CONFIG: u8 = 2;
/// Exit status for numerical failures and failed validation checks.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("numerical failure: {0}")]
    Numerical(#[from] specidx::Error),

    #[error("validation failed: first failing criterion is {id} ({name})")]
    Validation { id: u32, name: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Output { .. } => EXIT_CONFIG,
            Self::Numerical(_) | Self::Validation { .. } => EXIT_NUMERICAL,
        }
    }
}

/// Sizes the global rayon pool from `SPECIDX_THREADS` when it is set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SPECIDX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("SPECIDX_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    commands::dispatch(cli.command)
}
