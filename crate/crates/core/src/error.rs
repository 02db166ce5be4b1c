use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} is out of range at rank {rank}")]
    IndexTooLarge { index: u64, rank: u32 },

    #[error("scale 2^-{scale} is finer than the function rank {rank}")]
    ScaleTooFine { scale: u32, rank: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("degenerate weight scheme: {0}")]
    DegenerateScheme(String),

    #[error("operation requires a Norlund scheme, got {0}")]
    NotNorlund(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
