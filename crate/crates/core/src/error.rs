use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KvnError {
    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("representation mismatch: expected {expected}, found {found}")]
    Representation { expected: String, found: String },
    #[error("time step {dt} violates the stability bound; use dt <= {suggested}")]
    Cfl { dt: f64, suggested: f64 },
    #[error("non-finite state at step {step}: {detail}")]
    NonFinite { step: usize, detail: String },
    #[error("zero search failed: {0}")]
    ZeroSearch(String),
    #[error("shift of {shift} exceeds half the momentum range {half_range}")]
    Aliasing { shift: f64, half_range: f64 },
    #[error("singular coordinates: {0}")]
    Singular(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for KvnError {
    fn from(e: std::io::Error) -> Self {
        KvnError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, KvnError>;
