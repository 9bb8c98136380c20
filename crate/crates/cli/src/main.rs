mod cli;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::CliError;
use crate::output::RunManifest;

/// Environment variable fixing the number of Monte Carlo worker threads.
const WORKERS_ENV: &str = "RMDC_WORKERS";

fn configure_workers() -> Result<(), CliError> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = value
        .parse()
        .ok()
        .filter(|&w| w > 0)
        .ok_or_else(|| CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_workers()?;
    if let Command::Replay(args) = &cli.command {
        let mut run = RunManifest::read(&args.manifest)?.run;
        if let Some(out) = &args.out {
            run.set_out(out.clone());
        }
        return commands::execute(&run);
    }
    match cli::resolve(cli)? {
        Some(run) => commands::execute(&run),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rmdc: {e}");
            e.exit_code()
        }
    }
}
