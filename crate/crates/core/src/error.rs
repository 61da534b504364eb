use thiserror::Error;

/// Errors produced by the workbench.
///
/// Resource caps are reported through [`Error::CapExceeded`] and are never a
/// mathematical verdict; callers can tell them apart with [`Error::is_cap`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("element {element} is out of range for a universe of size {size}")]
    OutOfRange { element: usize, size: usize },
    #[error("operands live on different universes")]
    UniverseMismatch,
    #[error("invalid operation table: {0}")]
    InvalidTable(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("arity {arity} is not supported here: {reason}")]
    UnsupportedArity { arity: usize, reason: &'static str },
    #[error("resource cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: u64 },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("invalid interpolation parameter: {0}")]
    InvalidParameter(String),
    #[error("operation is not a near-unanimity operation")]
    NotNearUnanimity,
    #[error("no near-unanimity member in the fragment")]
    NoNearUnanimityMember,
    #[error("missing base interpolant for blocks {0:?}")]
    MissingBaseInterpolant(Vec<usize>),
    #[error("base interpolant for blocks {blocks:?} disagrees with the target at point {point}")]
    BadBaseInterpolant { blocks: Vec<usize>, point: usize },
    #[error("invalid pp-formula: {0}")]
    InvalidFormula(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("linear algebra: {0}")]
    LinearAlgebra(String),
    #[error("module pipeline stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("malformed input: {0}")]
    Input(String),
}

impl Error {
    pub fn cap(what: impl Into<String>, limit: u64) -> Self {
        Error::CapExceeded {
            what: what.into(),
            limit,
        }
    }

    /// True when the error (or the error it wraps) is a resource cap.
    pub fn is_cap(&self) -> bool {
        match self {
            Error::CapExceeded { .. } => true,
            Error::Stage { source, .. } => source.is_cap(),
            _ => false,
        }
    }

    pub(crate) fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
