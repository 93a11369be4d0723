//! `domcon`: exact norms, the 2x2 example, verification campaigns and the lp
//! search from the command line.
//!
//! Exit codes: 0 clean, 1 property violation detected, 2 usage or input error.

mod args;
mod commands;
mod exit;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Norms(a) => commands::norms(&cli.global, a),
        Command::Example(a) => commands::example(&cli.global, a),
        Command::Verify(a) => commands::verify(&cli.global, a),
        Command::SearchLp(a) => commands::search_lp(&cli.global, a),
    };
    ExitCode::from(outcome.unwrap_or_else(|e| commands::report_failure(&e)))
}
