use thiserror::Error;

use crate::atlas::{ParseError, ValidationReport};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    #[error("pairing matrix is not perfect")]
    PairingNotPerfect,
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(i64, i64),
    #[error("slot ({p},{q}) does not have weight {weight}")]
    SlotWeight { p: i64, q: i64, weight: i64 },
    #[error("map does not respect Hodge types: {0}")]
    HodgeTypeViolation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("block matrix is not idempotent")]
    NotIdempotent,
    #[error("invalid atlas:\n{0}")]
    InvalidAtlas(ValidationReport),
    #[error("unknown corpus item `{0}`")]
    UnknownCorpusItem(String),
    #[error("atlas has no self-intersection numbers")]
    MissingSelfIntersections,
    #[error(transparent)]
    Parse(#[from] ParseError),
}
