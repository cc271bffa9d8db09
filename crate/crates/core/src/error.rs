use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("decoding failure: no codeword within rank distance {radius}")]
    DecodingFailure { radius: usize },
    #[error("invalid ciphertext")]
    InvalidCiphertext,
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
