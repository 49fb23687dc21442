use thiserror::Error;

/// Errors surfaced by the library; the CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A computation was refused because it exceeds a configured ceiling
    /// (engine size, scan length). Distinct from `InvalidArgument` so
    /// callers can offer an opt-in retry.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// An internal consistency check failed; indicates a bug or a
    /// numeric-precision defect, never bad user input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
