use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{{{0}, {1}}} is not an edge of the graph")]
    NotAnEdge(usize, usize),

    #[error("node {0} is out of range for a graph with {1} nodes")]
    NodeOutOfRange(usize, usize),

    #[error("parent map contains a cycle through node {0}")]
    CyclicForest(usize),

    #[error("invalid forest: {0}")]
    InvalidForest(String),

    #[error("edit {0} cannot be applied")]
    EditNotApplicable(String),

    #[error("graph has {n} nodes, exhaustive search supports at most {max}")]
    TooLarge { n: usize, max: usize },

    #[error("infeasible request: {0}")]
    Infeasible(String),

    #[error("inconsistent depth at node {0}")]
    InconsistentDepth(usize),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
