//! `falsetheta`: command-line front end for series expansion and the
//! identity and congruence verification suites.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 usage or parse
//! error, 3 computation error.

mod args;
mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use falsetheta::Error;

use crate::args::Cli;

fn exit_code_for(err: &Error) -> u8 {
    match err.root() {
        Error::Parse(_)
        | Error::UnknownIdentity(_)
        | Error::InvalidClaim(_)
        | Error::InvalidModulus(_)
        | Error::NotPrime(_)
        | Error::NotSevenModEight(_)
        | Error::NotOddPrime(_)
        | Error::NonPositive(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match commands::run(&cli.command, &cli.global) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match output::render(&outcome, cli.global.format, &mut out).and_then(|_| out.flush()) {
        // a closed pipe (e.g. `| head`) is the reader's choice, not a failure
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
        Err(e) => {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(3);
        }
        Ok(()) => {}
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
