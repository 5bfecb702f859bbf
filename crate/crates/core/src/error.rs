use crate::lattice::Surface;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("divisors live on different surfaces ({0} vs {1})")]
    SurfaceMismatch(Surface, Surface),

    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{operation} is not available on {surface}")]
    Unsupported { operation: &'static str, surface: Surface },

    #[error("polarization {0} is not very ample (exceptional coefficients must be <= -1)")]
    NotAmple(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A formula produced a value that its derivation says is impossible.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("the underlying graph of the quiver is disconnected")]
    Disconnected,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("a search bound is required: {0}")]
    MissingBound(&'static str),

    #[error("vector does not lie on the constraint subspace")]
    OffSubspace,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Overflow and broken-invariant failures, as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Overflow(_) | Error::Internal(_))
    }
}
