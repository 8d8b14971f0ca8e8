use thiserror::Error;

use crate::ode::OdeError;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("integration failure: {0}")]
    Ode(#[from] OdeError),

    #[error("geometry construction failed: {0}")]
    Geometry(String),

    #[error("synthesis failure: {0}")]
    Synthesis(String),

    #[error("feedback queried in the wrong regime: expected {expected}, found {found}")]
    RegimeMismatch { expected: &'static str, found: &'static str },

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code per the CLI contract: 2 for validation problems,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Hypothesis(_) | Error::RegimeMismatch { .. } => 2,
            _ => 3,
        }
    }
}
