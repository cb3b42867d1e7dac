use std::fmt;

use mvm::Error;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;
pub const EXIT_DIVERGENCE: u8 = 4;
pub const EXIT_NUMERICAL: u8 = 5;

/// An error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. } => EXIT_CONVERGENCE,
            Error::Divergence(_) => EXIT_DIVERGENCE,
            Error::Numerical(_) | Error::Overflow(_) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, Failure>;
