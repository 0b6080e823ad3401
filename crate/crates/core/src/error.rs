use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("dimension mismatch")]
    DimMismatch,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("edge {0} is a loop")]
    LoopEdge(usize),
    #[error("no edge with index {0}")]
    NoSuchEdge(usize),
    #[error("invalid ideal edge")]
    InvalidIdealEdge,
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("degenerate form")]
    DegenerateForm,
    #[error("darboux normalization failed: {0}")]
    Darboux(String),
    #[error("leg arity mismatch: {0} outgoing vs {1} incoming")]
    ArityMismatch(usize, usize),
    #[error("chain is not homogeneous")]
    NotHomogeneous,
    #[error("products are not cyclic: {0}")]
    NonCyclic(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
