use std::path::PathBuf;

use thiserror::Error;

/// Every failure the laboratory can report.
#[derive(Debug, Error)]
pub enum PiteError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit: {what} = {requested} exceeds the configured maximum {max}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        max: usize,
    },

    #[error(
        "gamma = {gamma} is within {tolerance:e} of 1/sqrt(2), where the expansion is singular"
    )]
    Singularity { gamma: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("ground-state weight is zero; the target state cannot be reached")]
    DegenerateTarget,

    #[error("all damping factors fell below 1e-300 after step {step}; use log-space accumulation")]
    Underflow { step: usize },

    #[error("embedding error: eigenvalue {value} of M exceeds 1; shift the Hamiltonian so that lambda_1 >= 0")]
    Embedding { value: f64 },

    #[error("postselection impossible: ancilla |0> probability {p0:e} is below 1e-300")]
    PostselectionImpossible { p0: f64 },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = PiteError> = std::result::Result<T, E>;

impl PiteError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        PiteError::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        PiteError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        PiteError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            PiteError::Config { .. } | PiteError::InvalidArgument(_) => 2,
            PiteError::Io { .. } => 4,
            _ => 3,
        }
    }
}
