use thiserror::Error;

/// Errors raised by the library and the command-line tool.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("A2 = 0: the pencil A1 + λ·A2 is degenerate; use the scale operations for self-adjoint A")]
    ZeroA2,

    /// det(A1 + λA2) vanishes identically, so the spectrum is all of ℂ∞.
    #[error("singular pencil: det(A1 + λ·A2) vanishes identically; branch on `regular` instead")]
    SingularPencil,

    #[error("{0} failed to converge")]
    NoConvergence(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
