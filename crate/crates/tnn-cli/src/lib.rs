//! Experiment harness around the column simulator: config handling,
//! metrics emission, and the four experiment entry points (train,
//! incremental acquisition, cost estimation, engine equivalence).

pub mod config;
pub mod experiments;
pub mod metrics;

use std::path::PathBuf;

use thiserror::Error;
use tnn_core::dataio::DataError;

/// Failure categories, each with its own process exit code so scripted
/// callers can tell them apart.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("sample {sample} has label {label}, outside 0..{q}")]
    LabelRange { sample: usize, label: usize, q: usize },
    #[error("dataset {path} holds no samples")]
    EmptyDataset { path: PathBuf },
    #[error("missing checkpoint {path}: {reason}")]
    MissingCheckpoint { path: PathBuf, reason: String },
    #[error("engines diverged at gamma {gamma}: {diff}")]
    Divergence { gamma: usize, diff: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_)
            | CliError::LabelRange { .. }
            | CliError::EmptyDataset { .. }
            | CliError::MissingCheckpoint { .. } => 3,
            CliError::Divergence { .. } => 4,
        }
    }
}
