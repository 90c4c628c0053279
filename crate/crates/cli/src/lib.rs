//! The `paley` command-line tool.
//!
//! Every subcommand writes to a caller-supplied sink and returns the process
//! exit status, so the binary's `main` only parses arguments and forwards.
//!
//! Exit status: 0 success, 1 a check came back negative or a search found
//! nothing, 2 bad arguments, unreadable input or a value outside the domain.

use std::io;

pub mod args;
pub mod commands;
pub mod format;

pub use args::{Cli, Command};

/// Environment variable consulted when `--cap` is absent on commands that
/// may run the backtracking search.
pub const ORACLE_CAP_ENV: &str = "PALEY_ORACLE_CAP";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Negative(String),
    #[error("{0}")]
    Core(#[from] paley_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed factor file: {0}")]
    Parse(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use paley_core::Error as E;
        match self {
            CliError::Negative(_) => 1,
            CliError::Core(E::NotFound(_) | E::FailedVerification(_)) => 1,
            _ => 2,
        }
    }
}

pub type Outcome = Result<u8, CliError>;

/// Run a parsed command line against `out`; errors are left for the caller
/// to report.
pub fn run(cli: &Cli, out: &mut dyn io::Write) -> Outcome {
    match &cli.command {
        Command::Construct { p, root, cap } => commands::construct(out, *p, *root, *cap),
        Command::Verify { file, p, json } => commands::verify(out, file, *p, *json),
        Command::Factorization { p, cap, json } => commands::factorization(out, *p, *cap, *json),
        Command::Scan {
            min,
            max,
            jobs,
            out: path,
            cap,
        } => commands::scan(out, *min, *max, *jobs, path.as_deref(), *cap),
        Command::Bounds { p, json } => commands::bounds(out, *p, *json),
        Command::Charsum { p, cap, json } => commands::charsum(out, *p, *cap, *json),
        Command::Hadamard { p, json, matrix } => commands::hadamard(out, *p, *json, *matrix),
    }
}
