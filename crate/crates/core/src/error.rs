use thiserror::Error;

/// Errors raised by the numerical toolkit.
///
/// The split between [`Error::InvalidInput`] and the numerical variants
/// mirrors the CLI exit codes: bad parameters are a configuration problem,
/// everything else is a precondition of the numerics that the inputs failed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported dimension tag `{0}`")]
    UnsupportedDimension(String),

    #[error("grid {kind} precondition violated on {axis} axis: {detail}")]
    GridPrecondition {
        kind: &'static str,
        axis: char,
        detail: String,
    },

    #[error("field does not decay at the grid boundary (boundary/peak = {ratio:.3e}, limit {limit:.1e})")]
    BoundaryDecay { ratio: f64, limit: f64 },

    #[error("spectral content not resolved: tail fraction {tail:.3e} exceeds {limit:.1e}")]
    Unresolved { tail: f64, limit: f64 },

    #[error("gate not supported inside the box: outside mass {outside:.3e} exceeds {limit:.1e}")]
    Support { outside: f64, limit: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("too many lattice modes: {0} (limit {1})")]
    ModeOverflow(u64, u64),

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed parameters rather than by a
    /// numerical precondition.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::UnsupportedDimension(_) | Error::Json(_)
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
