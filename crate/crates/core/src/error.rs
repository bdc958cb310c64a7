use thiserror::Error;

use crate::bounds::BoundReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation requires a nonempty class")]
    EmptyClass,

    #[error("{what} needs {size} items, above the cap of {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A proven inequality failed to verify. This always indicates a bug.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("Sauer bound violated: |H| = {} > {} at d = {}", .0.class_size, .0.ds_bound, .0.d_used)]
    BoundViolated(Box<BoundReport>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
