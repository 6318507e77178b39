use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse {input:?} at column {}: {message}", .position + 1)]
    Parse { input: String, position: usize, message: String },
    #[error("invalid geometry {spec}: {reason}")]
    Invalid { spec: String, reason: String },
    #[error("refusing to build {spec}: estimated {estimate} vertices exceeds the limit of {limit}")]
    OverLimit { spec: String, estimate: u128, limit: u128 },
    #[error("{0}")]
    Usage(String),
    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },
    #[error("manifest {path}: {reason}")]
    Manifest { path: PathBuf, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] geomcensus::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> CliError {
        CliError::Io { path: path.into(), source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const BUDGET: i32 = 3;
}
