//! Error types for the classification pipeline.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("input is not a valid permutation")]
    InvalidPermutation,
    #[error("generated group exceeds the order cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("multiplication table violates the group axioms: {0}")]
    InvalidTable(String),
    #[error("member set is not a subgroup of the parent")]
    NotASubgroup,
    #[error("element does not normalize the subgroup")]
    DoesNotNormalize,
    #[error("subgroup does not have index two")]
    NotIndexTwo,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SingError {
    #[error("n and a must be coprime")]
    NotCoprime,
    #[error("require n > a > 0 (got n={n}, a={a})")]
    OutOfRange { n: i64, a: i64 },
    #[error("pair ({n},{a}) is not admissible for a branch-type point: {reason}")]
    DTypeInadmissible { n: i64, a: i64, reason: String },
}

#[derive(Error, Debug)]
pub enum CatalogueError {
    #[error("catalogue parse error: {0}")]
    ParseError(String),
    #[error("catalogue validation error: {0}")]
    ValidationError(String),
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("Hurwitz formula gives a non-integral genus")]
    NonIntegralGenus,
    #[error("mixed reduction requires the extension context")]
    MixedContextMissing,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("catalogue does not cover order {order}")]
    OrderNotCovered { order: usize },
    #[error("subgroup does not have index two")]
    NotIndexTwo,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("fixed-point test only applies over diagonal branch pairs")]
    NotDiagonal,
    #[error("non-fixed points of type ({n},{a}) over the diagonal have odd count {count}")]
    PairingParityError { n: i64, a: i64, count: usize },
    #[error("Noether consistency failed: K^2 + e != 12*chi")]
    NoetherViolation,
    #[error("orbit space of size {size} exceeds the oracle cap {cap}")]
    OracleCapExceeded { size: usize, cap: usize },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlbaneseError {
    #[error("Albanese fibre genus is only computed for irregularity 1 (got q={q})")]
    WrongIrregularity { q: usize },
    #[error("integrality violation in Albanese data: {0}")]
    IntegralityViolation(String),
}

#[derive(Error, Debug)]
pub enum PipelineError {
    #[error(transparent)]
    Catalogue(#[from] CatalogueError),
    #[error("the degree-2 extension splits")]
    SplitExtension,
    #[error("the supplied elements do not generate the index-2 subgroup")]
    NotGenerating,
    #[error("covering curve genus {genus} is below two")]
    GenusBelowTwo { genus: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Albanese(#[from] AlbaneseError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
