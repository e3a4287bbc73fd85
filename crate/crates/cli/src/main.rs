mod args;
mod commands;
mod golden;
mod plot;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

/// Failures with a dedicated exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad input; nothing was written. Exit 2.
    Config(String),
    /// Golden regression. Exit 1.
    Mismatch(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Mismatch(m) => write!(f, "golden mismatch: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return match f {
                Failure::Config(_) => 2,
                Failure::Mismatch(_) => 1,
            };
        }
        if let Some(e) = cause.downcast_ref::<rydsim::Error>() {
            return if e.is_integrator_failure() { 3 } else { 2 };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Campaign(a) => commands::campaign(&a),
        Command::Check(a) => golden::check(&a),
        Command::ListPresets => commands::list_presets(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
