use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the symmetry-breaking toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("invalid basis labels: {0}")]
    InvalidLabels(String),

    #[error("ambiguous eigenvalue grouping: {first} and {last} are chained through the tolerance {tolerance:e} but differ by more")]
    AmbiguousGrouping {
        first: Complex64,
        last: Complex64,
        tolerance: f64,
    },

    #[error("eigenvalue {0} is not present in the grading")]
    UnknownEigenvalue(Complex64),

    #[error("eigenvalue at index {index} has modulus {modulus}, expected 1")]
    NonUnimodular { index: usize, modulus: f64 },

    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("operator has zero Frobenius norm; the measure is undefined")]
    ZeroNorm,

    #[error("operator is empty")]
    EmptyOperator,

    #[error("expected a {expected} symmetry grading")]
    WrongSymmetryKind { expected: &'static str },

    #[error("series did not converge: remainder estimate {remainder:e} exceeds {tolerance:e}")]
    SeriesNotConverged { remainder: f64, tolerance: f64 },

    #[error("Bessel function argument out of range: order {order}, x = {x}")]
    BesselDomain { order: i64, x: f64 },

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("linear system is singular")]
    Singular,

    #[error("linear system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("truncation did not converge: |dM| = {delta:e} exceeds {tolerance:e}")]
    NotConverged { delta: f64, tolerance: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(op: &'static str, expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            op,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for conditioning, convergence and other numerical failures, as
    /// opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular
                | Error::IllConditioned { .. }
                | Error::NotConverged { .. }
                | Error::SeriesNotConverged { .. }
                | Error::ZeroNorm
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
