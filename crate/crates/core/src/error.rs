use thiserror::Error;

/// Errors raised by the computational core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid word: {0}")]
    Word(String),

    /// The word-problem search (or another bounded enumeration) hit its node cap.
    #[error("resource cap exceeded: {what} (cap {cap})")]
    Resource { what: String, cap: usize },

    /// A computation needed an element beyond the radius of the ambient ball.
    #[error("element of length {needed} needed but the ball only has radius {radius}")]
    OutOfBall { needed: usize, radius: usize },

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An internal invariant failed. Signals a bug or a genuine counterexample.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
