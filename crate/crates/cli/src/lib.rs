//! Command-line front end for the policy audit toolkit.
//!
//! Thin argument parsing and artifact plumbing over the `policy-audit`
//! library; every pipeline stage is its own subcommand so runs can be
//! inspected and resumed step by step. Exit codes: 0 success, 1 usage
//! error, 2 data error, 3 I/O error.

pub mod args;
pub mod artifacts;
pub mod commands;
pub mod render;

use std::fmt;

use anyhow::Result;

pub use args::{Cli, Command};

/// Usage problems clap cannot express, such as flag combinations that
/// only turn out to be contradictory after files are read. Exit code 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(args) => commands::ingest::run(args),
        Command::Stats(args) => commands::stats::run(args),
        Command::Train(args) => commands::train::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::Classify(args) => commands::classify::run(args),
        Command::Audit(args) => commands::audit::run(args),
        Command::Report(args) => commands::report::run(args),
    }
}

/// Maps an error chain to the documented exit code: usage errors win,
/// then anything rooted in an I/O failure, then data errors.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
    }
    for cause in err.chain() {
        if cause.is::<std::io::Error>() {
            return 3;
        }
    }
    2
}
