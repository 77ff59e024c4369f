mod args;
mod commands;
mod config;
mod input;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Exit status for a run whose checks did not all pass.
const CHECK_FAILURE: u8 = 1;
/// Exit status for usage and configuration errors.
const USAGE_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Curves(a) => commands::curves(a),
        Command::Verify(a) => commands::verify(a),
        Command::Select(a) => commands::select(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Estimate(a) => commands::estimate(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(CHECK_FAILURE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
