//! Experiment harness: scenario files, scheduler sweeps and result files.

pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

pub use config::parse_config;
pub use error::HarnessError;
pub use output::{parse_results_csv, results_csv, write_outputs, CsvRow};
pub use sweep::{aggregate_runs, run_each, run_sweep, SweepPlan};
