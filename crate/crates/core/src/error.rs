use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum QlabError {
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("invalid group parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown generator symbol `{0}`")]
    UnknownGenerator(String),
    #[error("ball of radius {radius} exceeds the cap of {cap} elements")]
    BallCapExceeded { radius: u32, cap: usize },
    #[error("operands live over different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("exponent p = {0} is outside [1, inf)")]
    InvalidExponent(f64),
    #[error("window is empty")]
    EmptyWindow,
    #[error("window radius {window} is smaller than the required {required}")]
    WindowTooSmall { window: u32, required: u32 },
    #[error("Neumann series diverges: ||id - A|| <= {0} is not below 1")]
    Divergent(f64),
    #[error("operation needs degree >= 1")]
    DegreeZero,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("simplex {0:?} is not in the complex")]
    UnknownSimplex(Vec<usize>),
    #[error("presentation has no relators but the word is nontrivial")]
    EmptyRelators,
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("scheme `{scheme}` is not supported on {group}")]
    UnsupportedScheme { scheme: String, group: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("identity check failed: {0}")]
    IdentityFailure(String),
    #[error("integer overflow in exact linear algebra")]
    Overflow,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, QlabError>;
