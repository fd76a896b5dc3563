use thiserror::Error;

/// Errors produced by graph construction, tree validation and the estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid side length must be at least {min}, got {got}")]
    GridTooSmall { min: usize, got: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("{what} is {size}, above the exact-computation guard of {limit}")]
    GuardExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("edge {0} is out of range")]
    EdgeOutOfRange(usize),
    #[error("edge {0} listed more than once")]
    DuplicateEdge(usize),
    #[error("edge set contains a cycle")]
    Cycle,
    #[error("edge set does not span the graph")]
    NotSpanning,
    #[error("expected {expected} branches, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("edge {0} is not a branch of the tree")]
    NotABranch(usize),
    #[error("edge {0} is a branch, not a chord")]
    NotAChord(usize),
    #[error("tree has no chords")]
    NoChords,
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("power series is not positive (value {0})")]
    NonPositiveSeries(f64),
    #[error("degree recurrence not stabilized for d = {degree} within k <= {k_max}")]
    NotStabilized { degree: usize, k_max: usize },
    #[error("quadrature failed to reach tolerance {tolerance:e} (estimated error {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
