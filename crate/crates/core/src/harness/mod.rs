//! Experiment runner behind the `nonlocal-lab` command line.
//!
//! Every trial draws from its own ChaCha8 stream keyed by the master seed and
//! an `(experiment, n)` domain, with the trial index as stream id, so tables
//! are identical for a given configuration whatever the worker count.

pub mod config;
pub mod experiments;
pub mod table;

use thiserror::Error;

pub use config::{Cli, CorrelationSpec, Experiment, ExperimentConfig, Format};
pub use experiments::{run_experiment, transcript_table};
pub use table::{emit_table, Cell, ResultTable};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "NONLOCAL_LAB_THREADS";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] crate::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}
