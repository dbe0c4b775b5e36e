use thiserror::Error;

use crate::setsys::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Arguments violate an operation's precondition.
    #[error("usage: {0}")]
    Usage(String),

    /// A sweep would exceed the configured size guard.
    #[error("capacity: {what} needs {requested}, guard is {limit}{hint}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// No Hadamard construction is catalogued for this order.
    #[error("unsupported order {order}: {reason}")]
    UnsupportedOrder { order: usize, reason: String },

    #[error("certification failed: {0}")]
    Certification(String),

    /// The hypergraph's (shifted / centered) discrepancy is too small to
    /// color this vertex: no edge or complement meets the threshold.
    #[error("discrepancy precondition violated: vertex {vertex} matches no edge")]
    Uncolorable { vertex: VertexSet },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
