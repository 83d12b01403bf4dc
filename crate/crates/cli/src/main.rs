//! `netnoise` command-line interface.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 validation failure.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use commands::Status;
use config::{Flags, RunConfig};

#[derive(Parser)]
#[command(
    name = "netnoise",
    version,
    about = "Noise in graph-state quantum networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact fidelity of one request (JSON).
    Fidelity(Flags),
    /// Worst-case Bell thresholds over a size grid (CSV).
    Threshold(Flags),
    /// Fidelity over a p grid and optionally a size grid (CSV).
    Sweep(Flags),
    /// Write every table and figure data file into a directory.
    Tables(Flags),
    /// Engine against the dense oracle on all small resources.
    Validate(Flags),
}

type Handler = fn(&RunConfig) -> anyhow::Result<Status>;

fn run(cli: Cli) -> anyhow::Result<Status> {
    let (name, flags, f): (&str, &Flags, Handler) = match &cli.command {
        Command::Fidelity(fl) => ("fidelity", fl, commands::fidelity),
        Command::Threshold(fl) => ("threshold", fl, commands::threshold),
        Command::Sweep(fl) => ("sweep", fl, commands::sweep),
        Command::Tables(fl) => ("tables", fl, commands::tables),
        Command::Validate(fl) => ("validate", fl, commands::validate),
    };
    let cfg = RunConfig::resolve(name, flags)?;
    if let Some(w) = cfg.workers {
        anyhow::ensure!(w > 0, "--workers must be positive");
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()?;
    }
    f(&cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ValidationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
