use thiserror::Error;

/// Errors produced by the coding toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("unsupported geometry: {cells} cells is narrower than the space window {beta}")]
    UnsupportedGeometry { cells: usize, beta: usize },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("message {message} outside [1:{max}]")]
    Domain { message: String, max: String },

    #[error("vector {0} violates the window-weight constraint")]
    InvalidCodeword(String),

    #[error("matrix is not irreducible")]
    NotIrreducible,

    #[error("power iteration did not converge after {iterations} steps (bracket [{lower}, {upper}])")]
    Convergence {
        lower: f64,
        upper: f64,
        iterations: usize,
    },

    #[error("unreachable state: {0}")]
    State(String),

    #[error("schedule error on write {write}: {reason}")]
    Schedule { write: usize, reason: String },

    #[error("invalid WOM table: {0}")]
    Validation(String),

    #[error("resource limit: {what} needs {needed} state bits, limit is {limit} (set TSCC_MAX_STATE_BITS to override)")]
    Resource {
        what: &'static str,
        needed: usize,
        limit: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal anomaly: {0}")]
    Anomaly(String),

    #[error("round trip failed on write {write}: encoded {expected}, decoded {decoded}")]
    RoundTrip {
        write: usize,
        expected: String,
        decoded: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
