use std::path::PathBuf;

use crate::adversary::RemovalResult;

/// Errors produced by solvers, adversaries, objectives and loaders.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violates a domain precondition (element out of range,
    /// mismatched universe sizes, `k > n`, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested layout or run cannot fit the cardinality budget.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Invalid construction parameters or an invalid objective table.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed input data.
    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// An exhaustive computation was asked for on an instance that is too
    /// large to enumerate.
    #[error("resource error: {0}")]
    Resource(String),

    /// Branch-and-bound ran out of node budget. The best removal found so
    /// far is attached; its residual is an upper bound on the true minimum.
    #[error("adversary node budget exceeded after {nodes_explored} nodes (incumbent residual {})", incumbent.residual_value)]
    AdversaryBudget {
        nodes_explored: u64,
        incumbent: Box<RemovalResult>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
