use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{vertex}` inside edge {edge}")]
    RepeatedVertexInEdge { edge: usize, vertex: String },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge {0} (duplicates not admitted)")]
    DuplicateEdge(usize),
    #[error("empty edge {0}")]
    EmptyEdge(usize),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("hypergraph is not {0}-uniform")]
    NotUniform(usize),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("sequence mismatch: {0}")]
    SequenceMismatch(String),
    #[error("guard failed [{step}{}]: {inequality}", if case.is_empty() { String::new() } else { format!(", {case}") })]
    GuardFailed {
        step: String,
        case: String,
        inequality: String,
    },
    #[error("size limit exceeded: {what} needs {needed}, limit {limit}")]
    LimitExceeded {
        what: String,
        needed: String,
        limit: String,
    },
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("DIMACS parse error on line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
