use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("adjacency is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} refused: n = {n} exceeds the exact bound {bound}")]
    ExactBoundExceeded { what: &'static str, n: usize, bound: usize },

    #[error("invalid labeling: {0}")]
    Labeling(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("packing failed verification: {0}")]
    Unverified(String),

    #[error("search exhausted: {0}")]
    Exhausted(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
