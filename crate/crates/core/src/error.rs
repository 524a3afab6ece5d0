use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a subgraph: {0}")]
    NotSubgraph(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("layer {k} is out of range for nesting level {nlvl}")]
    LayerOutOfRange { k: i32, nlvl: usize },
    #[error("constraint is not in alternating normal form: {0}")]
    NotAlternating(String),
    #[error("rule is not applicable at the given match")]
    NotApplicable,
    #[error("conflict graph is cyclic: {}", .0.join(" -> "))]
    Cyclic(Vec<String>),
    #[error("missing repairing sequence for graph {0}")]
    MissingSequence(usize),
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("repair invariant violated: {0}")]
    Internal(String),
    #[error("parse error at {pointer}: {message}")]
    Parse { pointer: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
