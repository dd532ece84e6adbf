use std::process::ExitCode;

use polyconic::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
    /// A checked property failed; the outputs were still written.
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    /// 1 for invalid input, 2 for numerical failure, 3 for a failed check.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Violation(_) => 3,
        })
    }

    pub fn context(self, what: impl std::fmt::Display) -> Self {
        match self {
            CliError::Validation(m) => CliError::Validation(format!("{what}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("{what}: {m}")),
            CliError::Io(m) => CliError::Io(format!("{what}: {m}")),
            CliError::Violation(m) => CliError::Violation(format!("{what}: {m}")),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NoConvergence(_)
            | Error::BracketFailure { .. }
            | Error::QuadratureFailure { .. }
            | Error::RingViolation { .. }
            | Error::SingularPoint { .. }
            | Error::ZeroGradient { .. }
            | Error::SingularQ { .. } => CliError::Numerical(msg),
            Error::InvalidInput(_)
            | Error::EmptyFocalSet
            | Error::NonPositiveWeight { .. }
            | Error::IndexOutOfRange { .. }
            | Error::LevelBelowMinimum { .. }
            | Error::LevelAtMinimum { .. }
            | Error::NotSymmetric(_)
            | Error::NotCircumscribed { .. }
            | Error::NotAFocus { .. }
            | Error::CollinearPoints => CliError::Validation(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
