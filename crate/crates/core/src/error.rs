use alloc::string::String;

/// Errors raised by graph construction, tree handling and the solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-pair ({0}, {0}) is not allowed")]
    SelfPair(usize),
    #[error("pair ({0}, {1}) given more than once")]
    DuplicatePair(usize, usize),
    #[error("weight {weight} for pair ({u}, {v}) must be finite and nonnegative")]
    InvalidWeight { u: usize, v: usize, weight: f64 },
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(usize),
    #[error("vertex sets overlap at {0}")]
    Overlap(usize),
    #[error("empty vertex set")]
    EmptySet,
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("unbalanced bisection: |L| = {left}, |R| = {right}")]
    Unbalanced { left: usize, right: usize },
    #[error("tree leaves do not match vertices 0..{0}")]
    LeafMismatch(usize),
    #[error("leaf {0} is not in the tree")]
    UnknownLeaf(usize),
    #[error("malformed tree text at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("n = {n} exceeds the limit {limit} of {what}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error("n = {n} is too small for {what}")]
    TooSmall { what: &'static str, n: usize },
    #[error("n = {0} must be even")]
    OddSize(usize),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(&'static str),
    #[error("parameter {name} = {value} out of range")]
    OutOfRange { name: &'static str, value: f64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
