use thiserror::Error;

use crate::cube::{Edge, Vertex};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {n} outside supported range {min}..={max}")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },

    #[error("{what} {index} out of range (limit {limit})")]
    IndexOutOfRange { what: &'static str, index: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coloring is not admissible: vertices {a} and {b} have no witnessing direction")]
    NotAdmissible { a: Vertex, b: Vertex },

    #[error("invalid subcube: {0}")]
    InvalidSubcube(String),

    #[error("symmetry reduction requested for n = {0}; only n <= 5 is supported")]
    SymmetryUnsupported(usize),

    #[error("unknown fixture `{0}` (expected one of fig1, fig2, bdf4)")]
    UnknownFixture(String),

    #[error("inconsistent vertex tuples on edge {edge}: colors {first} and {second}")]
    InconsistentTuples { edge: Edge, first: u32, second: u32 },

    #[error("no dominant/non-dominant completion exists for seed {0}")]
    NoCompletion(Edge),

    #[error("dominant pattern invalid: {0}")]
    PatternInvalid(String),

    #[error("assignment is missing a ray for color {0}")]
    MissingColor(u32),

    #[error("rejection budget of {0} draws exhausted; separation too large")]
    RejectionBudget(usize),

    #[error("ambiguous ray clustering: distance {distance:e} lies between equality and separation tolerances")]
    AmbiguousClustering { distance: f64 },

    #[error("state list is not a product basis with hypercube structure: {0}")]
    NotABasis(String),

    #[error("protocol extraction refused: {0}")]
    ProtocolRefused(String),

    #[error("malformed protocol tree: {0}")]
    MalformedTree(String),

    #[error("internal classifier disagreement on {0}")]
    ClassifierDisagreement(String),

    #[error("theorem violated: {0}")]
    TheoremViolation(String),

    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),

    #[error("document error: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
