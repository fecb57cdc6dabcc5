use thiserror::Error;

/// Errors raised by the core crate.
///
/// Contract violations (a degree above the truncation order, removing a unit
/// from an axis outside the support) are reported as errors rather than
/// being silently mapped to zero.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("multi-index length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("axis {axis} is not in the support of {index}")]
    NotInSupport { axis: usize, index: String },

    #[error("axis {axis} out of range for k = {k}")]
    AxisOutOfRange { axis: usize, k: usize },

    #[error("monomial {index} has degree {degree}, above the truncation order {r}")]
    DegreeTooHigh { index: String, degree: u32, r: u32 },

    #[error("algebra mismatch: D^{left_r}_{left_k} vs D^{right_r}_{right_k}")]
    AlgebraMismatch {
        left_r: u32,
        left_k: usize,
        right_r: u32,
        right_k: usize,
    },

    #[error("expected {expected} arguments, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("assignment does not cover Z: {0}")]
    Coverage(String),

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("oracle system too large: {unknowns} unknowns exceeds the limit of {limit}")]
    TooLarge { unknowns: u128, limit: usize },

    #[error("construction invariant violated: {0}")]
    Internal(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
