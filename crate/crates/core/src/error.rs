use thiserror::Error;

/// Errors produced by graph loading and the analyses built on top of it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("node set is not strongly connected")]
    NotStronglyConnected,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("spectral radius is zero")]
    ZeroRho,
}

impl Error {
    /// Process exit status for the command-line tool: 1 for bad input,
    /// 2 for an exhausted enumeration budget, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse { .. } | Error::UnknownNode(_) | Error::InvalidArgument(_) => 1,
            Error::BudgetExceeded { .. } => 2,
            Error::NonConvergence(_) | Error::NotStronglyConnected | Error::InsufficientData(_) | Error::ZeroRho => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
