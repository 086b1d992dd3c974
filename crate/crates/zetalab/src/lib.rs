//! Experiment orchestration on top of `zetalab-core`: declarative
//! configs, persistent zero caches, report emission, and the
//! acceptance suite.

pub mod acceptance;
pub mod cache;
pub mod config;
pub mod experiments;
pub mod report;

/// Errors produced by the orchestration layer.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] zetalab_core::Error),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

/// Software version stamped into every report row.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
