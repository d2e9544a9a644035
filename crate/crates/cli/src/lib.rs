//! Command-line front end: argument parsing, the five subcommands, and the
//! JSON/CSV artifacts they write.

pub mod args;
pub mod chain_io;
mod commands;
pub mod manifest;
pub mod plotdata;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command};
pub use commands::execute;

/// Exit status: 0 success, 1 runtime failure, 2 usage or validation.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl From<ggbayes::Error> for Failure {
    fn from(e: ggbayes::Error) -> Self {
        use ggbayes::Error as E;
        match e {
            E::Config(_) | E::Parse { .. } | E::NonPositive { .. } | E::Empty | E::Io { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

/// Parses `argv` (including the program name), runs it and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}
