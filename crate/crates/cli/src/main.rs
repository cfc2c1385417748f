//! `uncert`: evaluate uncertainty relations on observables and states.
//!
//! Exit status: 0 success, 1 input error, 2 numerical violation, 3 no
//! uncorrelated state found.

mod commands;
mod input;
mod render;

use std::fmt::Display;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "uncert", version, about = "Uncertainty relation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every pair relation on one (A, B, state) triple.
    Report(commands::ReportArgs),
    /// Random soundness campaign over GUE pairs and Haar states.
    Fuzz(commands::FuzzArgs),
    /// Eigenstate or uncorrelated-state check batteries.
    Critical(commands::CriticalArgs),
    /// Search for states that minimize or maximize a relation gap.
    Extremize(commands::ExtremizeArgs),
    /// Write a random problem file with observables A, B and state phi.
    Sample(commands::SampleArgs),
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const INPUT: u8 = 1;
    pub const VIOLATION: u8 = 2;
    pub const INFEASIBLE: u8 = 3;

    pub fn input(message: impl Display) -> Self {
        Self {
            code: Self::INPUT,
            message: message.to_string(),
        }
    }

    /// Should not happen; reported as an input error with context.
    pub fn internal(message: impl Display) -> Self {
        Self {
            code: Self::INPUT,
            message: format!("internal error: {message}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are input errors; 2 is reserved for violations.
            return ExitCode::from(if e.use_stderr() { Failure::INPUT } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Report(args) => commands::report(args),
        Command::Fuzz(args) => commands::fuzz(args),
        Command::Critical(args) => commands::critical(args),
        Command::Extremize(args) => commands::extremize(args),
        Command::Sample(args) => commands::sample(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("uncert: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
