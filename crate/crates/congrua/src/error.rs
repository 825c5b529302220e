//! Crate-wide error type.

use thiserror::Error;

use crate::field::FieldSpec;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two scalars (or aggregates of scalars) from different fields were mixed.
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    /// Inversion of zero, or a fraction with zero denominator.
    #[error("division by zero")]
    DivisionByZero,
    /// A prime field was requested with a composite or unit modulus.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// Prime moduli are capped so residue scans stay linear-time feasible.
    #[error("prime {0} exceeds the supported bound 2^20")]
    PrimeTooLarge(u64),
    /// A square, invertible matrix was required.
    #[error("matrix is singular")]
    Singular,
    /// Incompatible matrix shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Subspaces of different ambient spaces were combined.
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    /// A Gram matrix was not symmetric.
    #[error("matrix {index} is not symmetric")]
    NotSymmetric { index: usize },
    /// Structure constants do not describe a commutative product.
    #[error("structure constants are not commutative at (i, j, k) = ({0}, {1}, {2})")]
    NotCommutative(usize, usize, usize),
    /// The designated pivot form has a singular Gram matrix.
    #[error("pivot form {0} is singular")]
    SingularPivot(usize),
    /// Input text (CLI file or scalar literal) failed to parse or validate.
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
}

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
