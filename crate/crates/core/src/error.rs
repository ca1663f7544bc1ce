use thiserror::Error;

/// Structural problems with an instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("invalid vertex id `{0}`")]
    InvalidId(String),
    #[error("`{0}` is not a declared vertex")]
    UnknownVertex(String),
    #[error("`{vertex}` lists unknown neighbour `{neighbor}`")]
    UnknownNeighbor { vertex: String, neighbor: String },
    #[error("asymmetric adjacency on edge ({man},{woman})")]
    AsymmetricEdge { man: String, woman: String },
    #[error("`{vertex}` lists `{neighbor}` more than once")]
    DuplicateEntry { vertex: String, neighbor: String },
    #[error("second preference list for `{0}`")]
    DuplicateList(String),
    #[error("malformed line: {0}")]
    Malformed(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: InstanceError },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("matching line {line}: {message}")]
    MatchingLine { line: usize, message: String },
    #[error("{0} is not an edge of the instance")]
    NotAnEdge(String),
    #[error("vertex `{0}` is matched twice")]
    MatchedTwice(String),
    #[error("enumeration guard exceeded: {edges} edges > limit {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error("invalid start state: {0}")]
    InvalidStart(String),
    #[error("matching is not popular: {0}")]
    NotPopular(String),
    #[error("matching is not dominant: {0}")]
    NotDominant(String),
    #[error("cannot collapse level matching: {0}")]
    Collapse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("missing cost for edge {0}")]
    MissingCost(String),
    #[error("cost line {line}: {message}")]
    CostLine { line: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
