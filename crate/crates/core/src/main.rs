use std::process::ExitCode;

use clap::Parser;
use nonlocal_lab::harness::{emit_table, run_experiment, thread_cap, Cli, ExperimentConfig, HarnessError};

fn run() -> Result<(), HarnessError> {
    let cfg = ExperimentConfig::from_cli(Cli::parse())?;
    if let Some(n) = thread_cap() {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let table = run_experiment(&cfg)?;
    if cfg.out.is_none() {
        emit_table(&table, cfg.format, None)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nonlocal-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
