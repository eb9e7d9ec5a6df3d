use std::path::PathBuf;

use isobeam::Error as CoreError;
use thiserror::Error;

/// Failures of a CLI run, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot read config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for input or validation problems, 2 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                CoreError::Numerical(_)
                | CoreError::EigenNonConvergence { .. }
                | CoreError::Quadrature { .. },
            ) => 2,
            CliError::Output { .. } => 2,
            _ => 1,
        }
    }

    /// `[lo, hi]` when the failure locates a pole or a vanishing gauge.
    pub fn bracket(&self) -> Option<[f64; 2]> {
        match self {
            CliError::Core(CoreError::Pole { lo, hi }) => Some([*lo, *hi]),
            CliError::Core(CoreError::Singular { at, .. }) => Some([*at, *at]),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) | CliError::Config { .. } => "input",
            CliError::Output { .. } => "output",
            CliError::Core(e) => match e {
                CoreError::Pole { .. } => "pole",
                CoreError::Singular { .. } => "singular",
                CoreError::Parse { .. } => "parse",
                CoreError::Eval { .. } => "evaluation",
                CoreError::InvalidSpec(_) => "invalid-spec",
                CoreError::OutOfDomain(_) => "out-of-domain",
                CoreError::Contract(_) => "contract",
                CoreError::Quadrature { .. } => "quadrature",
                CoreError::EigenNonConvergence { .. } => "eigen-nonconvergence",
                CoreError::Numerical(_) => "numerical",
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
