use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the polytope is empty")]
    Empty,
    #[error("the polytope contains an entire line")]
    ContainsLine,
    #[error("ambient dimension {found} exceeds the supported bound {bound}")]
    DimensionBound { found: usize, bound: usize },
    #[error("not a cone: {0}")]
    NotACone(String),
    #[error("not a face of the given polytope")]
    NotAFace,
    #[error("dangling reference: {0}")]
    DanglingReference(String),
    #[error("inconsistent gluing: {0}")]
    InconsistentGluing(String),
    #[error("the positive-homomorphism cone is empty")]
    EmptyPositiveCone,
    #[error("enumeration bound hit: {count} candidates exceed the limit {limit}")]
    ResourceBound { count: usize, limit: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
