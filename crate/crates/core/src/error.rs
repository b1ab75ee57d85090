use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps these onto exit codes: [`Error::Parse`] and
/// [`Error::InvalidParameter`] are input errors, [`Error::InvariantBreach`]
/// signals an internal bug, and everything else is a violated precondition.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: ({n1}, {d1}) vs ({n2}, {d2})")]
    ShapeMismatch {
        n1: usize,
        d1: usize,
        n2: usize,
        d2: usize,
    },

    #[error("degenerate subset {subset:?}: points lie on a common hyperplane")]
    Degenerate { subset: Vec<usize> },

    #[error("endpoint degeneracy in subset {subset:?}")]
    EndpointDegeneracy { subset: Vec<usize> },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial vanishes at interval endpoint {0}")]
    RootAtEndpoint(String),

    #[error("sign vector {0:?} has an odd number of negative entries")]
    ParityViolation(Vec<i8>),

    #[error("scaling factor {0} is zero")]
    ZeroScaling(usize),

    #[error("mixed determinant r_{j} vanishes for subset {subset:?}")]
    VanishingMixedDeterminant { subset: Vec<usize>, j: usize },

    #[error("order types differ: {0}")]
    OrderTypeMismatch(String),

    #[error("retry budget exhausted: {0}")]
    Exhausted(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rotation rejected: {0}")]
    RotationRejected(String),

    #[error("internal invariant breached: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, Error>;
