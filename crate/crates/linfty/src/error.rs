use thiserror::Error;

/// Crate-wide error type.  Input-validation failures carry a short machine
/// readable code (`E_...`) used by the command line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("E_RATIONAL: cannot parse `{0}` as an exact rational (expected `p` or `p/q`)")]
    Rational(String),

    #[error("E_UNDECLARED: generator `{0}` is not declared in the space block")]
    Undeclared(String),

    #[error("E_DUPLICATE: generator `{0}` declared twice")]
    Duplicate(String),

    #[error("E_PARITY: {0}")]
    Parity(String),

    #[error("E_SPACE: operands live over different spaces")]
    SpaceMismatch,

    #[error("E_CUTOFF: {0}")]
    Cutoff(String),

    #[error("E_DEGENERATE: {0}")]
    Degenerate(String),

    #[error("E_DIM: {0}")]
    Dimension(String),

    #[error("E_SCHEMA: {0}")]
    Schema(String),

    #[error("E_INPUT: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
