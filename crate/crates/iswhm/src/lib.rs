//! Command-line surface, file formats and charts for the `iswhm_core`
//! decision engine.

use std::path::Path;

pub mod cli;
pub mod commands;
pub mod config;
pub mod format;
pub mod svg;

pub use config::{FileConfig, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] iswhm_core::Error),
    #[error("missing required setting `{0}`")]
    Missing(&'static str),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Stdout(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

impl From<iswhm_core::evolve::EvolveError> for CliError {
    fn from(e: iswhm_core::evolve::EvolveError) -> Self {
        CliError::Core(e.into())
    }
}
