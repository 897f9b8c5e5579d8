use std::path::PathBuf;

use thiserror::Error;

/// Everything that ends a run with exit status 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(#[from] hamflow_core::Error),

    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}
