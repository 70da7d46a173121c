use std::time::Duration;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("reserved identifier `{name}` at line {line}, column {column}")]
    Reserved {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("statement contains a group inverse; an inverse-free statement is required")]
    NotInverseFree,

    #[error("normal form exceeds the size cap of {cap} words")]
    SizeCapExceeded { cap: usize },

    #[error("search budget exhausted after {nodes} nodes in {elapsed:?}")]
    BudgetExceeded { nodes: u64, elapsed: Duration },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("join term {0} contains no inverse")]
    NoInverse(usize),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("variable `{0}` has no assigned value")]
    Unassigned(String),

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("countermodel rejected: {0}")]
    CertificateRejected(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
