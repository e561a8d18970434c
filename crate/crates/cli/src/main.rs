mod args;
mod commands;
mod input;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_COMPUTE: u8 = 65;
pub const EXIT_IO: u8 = 74;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Compute(_) => EXIT_COMPUTE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Compute(m) | Failure::Io(m) => m,
        }
    }
}

impl From<l1stab::Error> for Failure {
    fn from(e: l1stab::Error) -> Self {
        match e {
            l1stab::Error::NoConvergence { .. } => Failure::Compute(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Rewrites arguments that look like negative numbers (`-1/2`, `-.5`) to
/// the `~` form so the parser does not mistake them for flags.
fn protect_negative_literals(args: impl Iterator<Item = String>) -> Vec<String> {
    args.map(|a| {
        let mut chars = a.chars();
        let looks_negative = chars.next() == Some('-') && chars.next().is_some_and(|c| c.is_ascii_digit() || c == '.');
        if looks_negative {
            format!("~{}", &a[1..])
        } else {
            a
        }
    })
    .collect()
}

fn main() -> ExitCode {
    let argv = protect_negative_literals(std::env::args());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
