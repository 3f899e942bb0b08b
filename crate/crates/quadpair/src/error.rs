use thiserror::Error;

#[derive(Debug, Error)]
pub enum QpError {
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ill-formed structure: {0}")]
    IllFormed(String),
    #[error("axiom failure: {0}")]
    AxiomFailure(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("unrepresentable angle: {0}")]
    UnrepresentableAngle(String),
    #[error("goodness failure: {0}")]
    Goodness(String),
    #[error("composability violation: {0}")]
    Composability(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
