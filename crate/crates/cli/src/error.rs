use std::io;
use std::path::PathBuf;

use isst_core::experiments::ExperimentError;
use isst_core::model::ModelError;
use isst_core::report::ReportError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad scenario, flag, selector or result file. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// Could not write results. Exit code 3.
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    /// A simulation invariant broke. Exit code 1.
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Internal(_) => 1,
        }
    }

    pub fn input(msg: impl ToString) -> Self {
        CliError::Input(msg.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Config(_) => CliError::Input(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Model(m) => m.into(),
            ExperimentError::Io(source) => CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            },
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::Input(e.to_string())
    }
}

// Only in-memory buffers are written through these; file writes map to `Io`.
impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
