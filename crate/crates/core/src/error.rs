use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("singular point at z = {at}: {what}")]
    Singular { at: f64, what: String },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("cannot evaluate `{node}` at z = {at}: {message}")]
    Eval { node: String, at: f64, message: String },

    #[error("pole between z = {lo} and z = {hi}")]
    Pole { lo: f64, hi: f64 },

    #[error("quadrature did not converge: estimated error {achieved:e} > tolerance {tol:e}")]
    Quadrature { achieved: f64, tol: f64 },

    #[error("invalid parameters: {0}")]
    InvalidSpec(String),

    #[error("argument {0} outside the supported domain")]
    OutOfDomain(String),

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    EigenNonConvergence { iterations: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
