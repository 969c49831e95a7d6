mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

/// Failure of one invocation, with its exit status.
#[derive(Debug)]
pub enum CliError {
    Lib(hypersym::Error),
    Input(String),
}

impl From<hypersym::Error> for CliError {
    fn from(e: hypersym::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn status(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_cap() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Input(s) => f.write_str(s),
        }
    }
}

fn run<I: IntoIterator<Item = std::ffi::OsString>>(argv: I) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.status()
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
