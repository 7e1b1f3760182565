//! `spdc-gauss`: fidelity, factor optimization, sweeps and LG mode
//! decomposition from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::{Params, OUTPUT_DIR_ENV};

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<spdc_gauss::Error> for CliError {
    fn from(e: spdc_gauss::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(name = "spdc-gauss", version, about = "Gaussian-family approximations to SPDC phase matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity of one approximation
    #[command(allow_negative_numbers = true)]
    Fidelity(Params),
    /// Factors that maximize the fidelity
    #[command(allow_negative_numbers = true)]
    Optimize(Params),
    /// Fidelity over a grid of alpha, beta or pulse duration
    #[command(allow_negative_numbers = true)]
    Sweep(Params),
    /// Laguerre-Gaussian coincidence amplitudes, Schmidt number and spiral spectrum
    #[command(allow_negative_numbers = true)]
    Decompose(Params),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, params) = match cli.command {
        Command::Fidelity(p) => ("fidelity", p),
        Command::Optimize(p) => ("optimize", p),
        Command::Sweep(p) => ("sweep", p),
        Command::Decompose(p) => ("decompose", p),
    };
    let params = params.merged()?;
    let ext = if params.csv()? { "csv" } else { "json" };
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    let path = match (params.output_path(env_dir.as_deref()), &env_dir) {
        (Some(p), _) => Some(p),
        (None, Some(dir)) => Some(dir.join(format!("{name}.{ext}"))),
        (None, None) => None,
    };
    let mut out = output::open(path.as_deref())?;
    match name {
        "fidelity" => commands::run_fidelity(&params, &mut *out),
        "optimize" => commands::run_optimize(&params, &mut *out),
        "sweep" => commands::run_sweep(&params, &mut *out),
        _ => commands::run_decompose(&params, &mut *out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
