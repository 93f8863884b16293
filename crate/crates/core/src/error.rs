use thiserror::Error;

use crate::polyring::Variable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("r-Stirling number [{m}, {n}]_{r} is undefined for m < r")]
    RStirlingBelowBase { m: i64, n: i64, r: usize },

    #[error("variable mismatch: {left} vs {right}")]
    VariableMismatch { left: Variable, right: Variable },

    #[error("polynomial is not even; cannot rewrite in u = n(n+r)")]
    NotEven,

    #[error("conversion expects variable {expected}, got {found}")]
    WrongVariable { expected: Variable, found: Variable },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial division left a nonzero remainder of degree {degree}")]
    InexactDivision { degree: usize },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("coefficient vector length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
