use thiserror::Error;

use crate::coherence::DutchBook;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point lies outside the unit cube")]
    OutsideCube,

    #[error("empty input")]
    EmptyInput,

    #[error("points have ragged dimensions")]
    RaggedDimensions,

    #[error("invalid coordinate selection: {0}")]
    InvalidCoordinates(String),

    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("formula depth {depth} exceeds the cap of {cap}")]
    DepthCap { depth: usize, cap: usize },

    #[error("invalid limit setting `{0}`")]
    InvalidLimit(String),

    #[error("{0}")]
    InvalidInput(String),

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("invalid rational `{0}` (expected p/q or an integer)")]
    InvalidRational(String),

    #[error("price {0} lies outside [0,1]")]
    PriceOutOfRange(String),

    #[error("book has {found} prices for {expected} events")]
    BookSize { expected: usize, found: usize },

    #[error("book is incoherent")]
    Incoherent(Box<DutchBook>),

    #[error("event list is empty")]
    EmptyEventList,

    #[error("polytope is not contained in the unit cube")]
    NotInCube,

    #[error("substitution is not defined on {0}")]
    DomainMismatch(String),

    #[error("no exponent found up to {0}")]
    ExponentBound(u64),

    #[error("internal verification failure: {0}")]
    Internal(String),
}
