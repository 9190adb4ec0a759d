//! Batch front end for the spam-detection and robustness pipeline:
//! clean -> split -> thesaurus -> train -> evaluate -> attack -> robustness
//! -> report. Stages communicate only through files, so any stage can be
//! re-run in isolation.

mod args;
mod commands;
mod context;

use clap::error::ErrorKind;
use clap::Parser;

/// Errors carry their exit status: usage problems exit 1, data problems
/// exit 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

fn main() {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    if let Err(e) = commands::run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
