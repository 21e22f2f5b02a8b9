use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("region endpoints coincide")]
    DegeneratePair,
    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),
    #[error("unsupported beta range: {0}")]
    UnsupportedRange(String),
    #[error("duplicate point: indices {first} and {second} have equal coordinates")]
    DuplicatePoint { first: usize, second: usize },
    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("query point lies outside the bounding box")]
    OutOfBounds,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
