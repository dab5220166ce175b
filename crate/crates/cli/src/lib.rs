//! Command-line front end for `trustnet-core`.
//!
//! [`dispatch`] parses an argument list, runs one subcommand and returns the
//! process exit status: 0 on success, 1 for usage errors, 2 for data errors.

pub mod args;
mod commands;
pub mod config;
pub mod manifest;
pub mod tables;

use clap::error::ErrorKind;
use clap::Parser;
use std::ffi::OsString;
use std::fmt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or settings.
    Usage(String),
    /// Unreadable or inconsistent input, or a failed analysis.
    Data(anyhow::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn data(msg: impl fmt::Display) -> Self {
        CliError::Data(anyhow::anyhow!("{msg}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Data(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<trustnet_core::Error> for CliError {
    fn from(e: trustnet_core::Error) -> Self {
        use trustnet_core::Error::*;
        match e {
            InvalidConfig(_) | InvalidSample(_) | InvalidDivisor(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.into()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Data(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

/// Runs the command line `argv` (program name first) and returns the exit status.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match args::Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let command: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::run(cli.command, command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
