use alloc::string::String;

/// Errors reported by the counting routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid shape {r}x{s}x{n}: every dimension must be positive")]
    InvalidShape { r: usize, s: usize, n: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
