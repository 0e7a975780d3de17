use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge [{0},{1}]")]
    DuplicateEdge(usize, usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("graph is not connected")]
    NotConnected,

    #[error("not a tree: {0}")]
    NotATree(String),

    /// Exhaustive search for a vertex ran out of node expansions.
    #[error("search budget of {budget} node expansions exceeded at vertex {vertex}")]
    BudgetExceeded { vertex: usize, budget: u64 },

    #[error("{what}: size {size} exceeds the enumeration bound {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("degenerate walk: {0}")]
    DegenerateWalk(String),

    #[error("formula error: {0}")]
    Formula(String),

    #[error("antisymmetry violated: {0} <= {1} and {1} <= {0}")]
    Antisymmetry(usize, usize),

    #[error("decode error: {0}")]
    Decode(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
