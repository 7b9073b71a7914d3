use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in a computation.
///
/// Variants are grouped by what the caller did: bad input data, a
/// mathematical precondition that does not hold, or a size guard.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polytope has no vertices")]
    NoVertices,
    #[error("vertex {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("point {0:?} is not a vertex: it lies in the convex hull of the other points")]
    NotExtreme(Vec<i64>),
    #[error("polytope is a single point; facets are undefined")]
    Degenerate,
    #[error("polytope is not normal; use the force option for a formal result")]
    NotNormal,
    #[error("class group has torsion {0:?}; weights need a torsionfree class group")]
    Torsion(Vec<String>),
    #[error("weight equivalence for rank {0} is unsupported (only ranks up to 2)")]
    UnsupportedRank(usize),
    #[error("weight assignments differ in shape: {0}")]
    ShapeMismatch(String),
    #[error("configuration lives in dimension {0}; standard diagrams need dimension 2")]
    NotPlanar(usize),
    #[error("polytope has rank {0}; rank-2 classification needs rank 2")]
    RankNotTwo(usize),
    #[error("the lattice points do not span the full lattice")]
    SpanNotFull,
    #[error("{what}: {count} exceeds the guard limit {limit} (raise it with TORICLASS_GUARD_LIMIT)")]
    TooLarge { what: String, count: u128, limit: u128 },
    #[error("variable {0:?} is not a lattice point of the polytope")]
    ForeignVariable(Vec<i64>),
    #[error("variable index {index} is out of range: the polytope has {count} lattice points")]
    UnknownVariable { index: usize, count: usize },
    #[error("binomial {0} is not in the toric ideal")]
    NotInIdeal(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// True for errors caused by unreadable or ill-formed input data, as
    /// opposed to well-formed input that fails a mathematical precondition.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Malformed(_) | Error::DimensionMismatch { .. } | Error::NoVertices
        )
    }
}
