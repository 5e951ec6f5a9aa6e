use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("inconsistent orientation: {0}")]
    Orientation(String),

    #[error("invalid site: {0}")]
    Site(String),

    #[error("move {step} ({kind}) not applicable: {reason}")]
    Move { step: usize, kind: String, reason: String },

    #[error("resource guard exceeded: {0}")]
    Guard(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for the CLI: 2 input errors, 3 verification
    /// failures, 4 resource guards.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Guard(_) => 4,
            Error::Verification(_) | Error::Move { .. } => 3,
            _ => 2,
        }
    }
}
