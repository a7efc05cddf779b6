//! Crate-wide error type.

use core::fmt;

/// Errors raised by the kernel and the assemblage pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operand has the wrong dimension for the requested operation.
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    /// Operand families disagree on (dim, settings, outcomes).
    ShapeMismatch { context: &'static str },
    /// A matrix required to be Hermitian deviates beyond tolerance.
    NotHermitian { deviation: f64 },
    /// An eigenvalue sits below the negativity tolerance of a PSD input.
    NegativeEigenvalue { value: f64 },
    /// Every eigenvalue of the operator lies below the support threshold.
    ZeroOperator,
    /// Schatten order outside `[1, ∞]`.
    InvalidNormOrder { p: f64 },
    /// A scalar parameter lies outside its admissible domain.
    InvalidParameter { what: &'static str, value: f64 },
    /// The operation is only defined in a more specific scenario.
    UnsupportedScenario { required: &'static str },
    /// A commuting SEO was required; carries the witnessing commutator norm.
    NoncommutingSeo { max_commutator_norm: f64 },
    /// Common-eigenbasis extraction failed after the retry cap.
    DegeneracyRetriesExhausted { attempts: usize },
    /// A free operation violates stochasticity or Kraus completeness.
    InvalidOperation {
        what: &'static str,
        magnitude: f64,
    },
    /// Normalization constraint violated (Schmidt spectra, distributions).
    NormalizationViolation { deviation: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch {
                context,
                expected,
                found,
            } => write!(
                f,
                "dimension mismatch in {context}: expected {expected}, found {found}"
            ),
            Error::ShapeMismatch { context } => {
                write!(f, "shape mismatch in {context}")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (deviation {deviation:.3e})")
            }
            Error::NegativeEigenvalue { value } => {
                write!(f, "eigenvalue {value:.3e} below negativity tolerance")
            }
            Error::ZeroOperator => write!(f, "operator has no support above threshold"),
            Error::InvalidNormOrder { p } => {
                write!(f, "Schatten order p = {p} outside [1, inf]")
            }
            Error::InvalidParameter { what, value } => {
                write!(f, "parameter {what} = {value} outside its domain")
            }
            Error::UnsupportedScenario { required } => {
                write!(f, "unsupported scenario: requires {required}")
            }
            Error::NoncommutingSeo {
                max_commutator_norm,
            } => write!(
                f,
                "SEO is noncommuting (max commutator norm {max_commutator_norm:.3e})"
            ),
            Error::DegeneracyRetriesExhausted { attempts } => write!(
                f,
                "common eigenbasis not resolved after {attempts} randomized attempts"
            ),
            Error::InvalidOperation { what, magnitude } => {
                write!(f, "invalid operation: {what} violated by {magnitude:.3e}")
            }
            Error::NormalizationViolation { deviation } => {
                write!(f, "normalization violated by {deviation:.3e}")
            }
        }
    }
}

impl core::error::Error for Error {}
