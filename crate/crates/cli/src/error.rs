use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_BREACH: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_FIT: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("solver failed: {0}")]
    Solver(flagcy_core::Error),

    #[error("decay fit failed: {0}")]
    Fit(flagcy_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Fit(_) => EXIT_FIT,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<flagcy_core::Error> for CliError {
    fn from(e: flagcy_core::Error) -> Self {
        use flagcy_core::Error as E;
        match e {
            E::UnsupportedFamily(_)
            | E::Domain(_)
            | E::Arity { .. }
            | E::MethodMismatch { .. }
            | E::InvalidStep(_) => CliError::Config(e.to_string()),
            E::UnderdeterminedFit(_) => CliError::Fit(e),
            _ => CliError::Solver(e),
        }
    }
}
