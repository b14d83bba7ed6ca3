use std::path::PathBuf;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the pipeline.
///
/// Variants split along the CLI exit-code boundaries: usage problems,
/// data/contract problems, and I/O problems.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two objects that must live on the same grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Scalar/vector arity disagreement between fields.
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// A parameter is outside its admissible domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A precondition of an operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Input is degenerate (all-zero fields, empty annulus energy, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Time step violates a stability bound; the message names the bound.
    #[error("step size too large: {0}")]
    StepSize(String),

    /// On-disk bundle or report is malformed.
    #[error("format error: {0}")]
    Format(String),

    /// Filesystem failure with the offending path.
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
