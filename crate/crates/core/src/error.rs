use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("no vertices declared")]
    NoVertices,

    #[error("line {line}: duplicate {what} `{name}`")]
    Duplicate {
        line: usize,
        what: &'static str,
        name: String,
    },

    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },

    #[error("line {line}: unknown arrow `{name}`")]
    UnknownArrow { line: usize, name: String },

    #[error("quiver has an oriented cycle through vertex `{vertex}`")]
    CyclicQuiver { vertex: String },

    #[error("line {line}: {message}")]
    InvalidRelation { line: usize, message: String },

    #[error("cannot compose {left} after {right}: {left} starts at `{left_source}` but {right} ends at `{right_target}`")]
    CompositionMismatch {
        left: String,
        right: String,
        left_source: String,
        right_target: String,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("relation {relation} evaluates to nonzero matrix {residual}")]
    RelationViolated { relation: String, residual: String },

    #[error("representations are over different quivers")]
    QuiverMismatch,

    #[error("size mismatch: expected length {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("not an exceptional pair: {0}")]
    NotExceptionalPair(String),

    #[error("class {0} is not numerically exceptional")]
    NotExceptional(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{0}")]
    Unsupported(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
