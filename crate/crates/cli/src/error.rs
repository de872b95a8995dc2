use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

/// Pipeline step an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Topology,
    Laplacian,
    Observation,
    Simulate,
    Recover,
    Truth,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Topology => "topology",
            Stage::Laplacian => "laplacian",
            Stage::Observation => "observation",
            Stage::Simulate => "simulate",
            Stage::Recover => "recover",
            Stage::Truth => "truth",
        };
        f.write_str(name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: lapspec::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Exit status for validation failures, including malformed input files.
pub const EXIT_VALIDATION: u8 = 2;
/// Exit status for numerical breakdown in the estimator or the reference.
pub const EXIT_NUMERICAL: u8 = 3;
/// Exit status for filesystem failures.
pub const EXIT_IO: u8 = 4;

impl CliError {
    pub fn stage(stage: Stage) -> impl FnOnce(lapspec::Error) -> CliError {
        move |source| CliError::Stage { stage, source }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn json(path: impl Into<PathBuf>) -> impl FnOnce(serde_json::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Json { path, source }
    }

    pub fn csv(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Csv { path, source }
    }

    /// The pipeline stage, for errors raised inside a run.
    pub fn failed_stage(&self) -> Option<Stage> {
        match self {
            CliError::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Parse { .. } => EXIT_VALIDATION,
            CliError::Stage { source, .. } if source.is_numerical() => EXIT_NUMERICAL,
            CliError::Stage { .. } => EXIT_VALIDATION,
            CliError::Io { .. } => EXIT_IO,
            CliError::Json { source, .. } if source.is_io() => EXIT_IO,
            CliError::Json { .. } => EXIT_VALIDATION,
            CliError::Csv { source, .. } if source.is_io_error() => EXIT_IO,
            CliError::Csv { .. } => EXIT_VALIDATION,
        }
    }
}
