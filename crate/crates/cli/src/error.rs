use std::io;
use std::path::PathBuf;

use ltesim_core::SimError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error(transparent)]
    Sim(#[from] SimError),

    #[error("run {context} failed: {source}")]
    Run { context: String, source: SimError },

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("no reports to write")]
    NoReports,

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("results csv line {line}: {message}")]
    Csv { line: usize, message: String },
}
