//! Parameter sweeps and their aggregation.

mod summary;
mod sweep;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::domain::ConfigError;

pub use summary::{argmax_degree, mean_sd, summarize, write_summary, AggregateRow, Summary};
pub use sweep::{
    default_jobs, fingerprint, row_key, run_configs, run_sweep, SweepPoint, SweepReport, SweepRow,
    SweepSpec, JOBS_ENV, SWEEP_SCHEMA,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("sweep spec: {0}")]
    Spec(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
