use std::path::PathBuf;

use crate::discretization::State;

/// Errors raised anywhere in the solver stack.
///
/// Every variant maps to a stable machine-readable code (see [`Error::code`])
/// that the CLI and the C interface report before any human-readable detail.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A constitutive function was evaluated at a non-positive height.
    #[error("height must be positive, got {h}")]
    Domain { h: f64 },

    /// An operation was called with arguments that violate its contract.
    #[error("usage error: {0}")]
    Usage(String),

    /// Invalid physical parameters or step-control settings.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The height dropped to or below the positivity floor.
    #[error("positivity lost at t = {t:e}, x = {x:.6}: min h = {min_h:e} <= floor {floor:e}")]
    Positivity { t: f64, x: f64, min_h: f64, floor: f64 },

    /// A banded linear system could not be factored.
    #[error("singular linear system: zero pivot in row {row}")]
    Singular { row: usize },

    /// A fully explicit integration produced non-finite values.
    #[error("explicit integration diverged at t = {t:e}")]
    Divergence { t: f64 },

    /// Adaptive stepping shrank the step below `dt_min`.
    #[error("step size {dt:e} fell below dt_min {dt_min:e} at t = {t:e}")]
    NonConvergence {
        t: f64,
        dt: f64,
        dt_min: f64,
        last_state: Box<State>,
    },

    /// Malformed configuration text.
    #[error("config error at line {line}, key `{key}`: {reason}")]
    Config { line: usize, key: String, reason: String },

    /// Malformed or incompatible snapshot file.
    #[error("snapshot {path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable upper-case code for machine consumption.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "DOMAIN",
            Error::Usage(_) => "USAGE",
            Error::InvalidParameter { .. } => "INVALID_PARAMETER",
            Error::Positivity { .. } => "POSITIVITY_LOSS",
            Error::Singular { .. } => "SINGULAR_SYSTEM",
            Error::Divergence { .. } => "DIVERGENCE",
            Error::NonConvergence { .. } => "NON_CONVERGENCE",
            Error::Config { .. } => "CONFIG",
            Error::Snapshot { .. } => "SNAPSHOT",
            Error::Io { .. } => "IO",
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
