//! Error type shared across the crate.

use std::error::Error;
use std::fmt;

/// Everything that can go wrong while building contexts, parsing input, or
/// running the elimination and closure routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NfError {
    /// The characteristic passed as `p` is not a prime number.
    NonPrime(u64),
    /// The base passed as `q` is not a prime power.
    NotPrimePower(u64),
    /// The requested structure would exceed the configured size cap.
    CapExceeded { required: u128, cap: u128 },
    /// `(q, m)` violates one of the Dickson pair conditions.
    NotDicksonPair { q: u64, m: u64, reason: String },
    /// Multiplicative inverse of zero requested.
    ZeroInverse,
    /// Discrete logarithm of zero requested.
    ZeroArgument,
    /// The operation needs a right-distributivity failure, but the
    /// multiplication is fully distributive (grade 1, an ordinary field).
    FullyDistributive,
    /// Vector or matrix dimensions do not line up.
    DimMismatch { expected: usize, got: usize },
    /// An entry required to be non-zero was zero.
    PivotZero { row: usize, col: usize },
    /// The (alpha, beta, lambda) triple does not witness a
    /// right-distributivity failure.
    TripleInvalid,
    /// A column left of the working column still has two non-zero entries
    /// among the rows handed to the trick.
    TrickPrecondition { col: usize },
    /// Numeric argument outside the supported range.
    BadRange(String),
    /// Malformed element, vector, or matrix text.
    Syntax(String),
    /// A term uses x^k with k at or above the extension degree.
    DegreeTooHigh { power: u32, degree: u32 },
    /// An internal consistency check failed; this is a bug.
    Internal(String),
}

impl NfError {
    /// Stable machine-readable label, independent of the display text.
    pub fn code(&self) -> &'static str {
        match self {
            NfError::NonPrime(_) => "NonPrime",
            NfError::NotPrimePower(_) => "NotPrimePower",
            NfError::CapExceeded { .. } => "CapExceeded",
            NfError::NotDicksonPair { .. } => "NotDicksonPair",
            NfError::ZeroInverse => "ZeroInverse",
            NfError::ZeroArgument => "ZeroArgument",
            NfError::FullyDistributive => "FullyDistributive",
            NfError::DimMismatch { .. } => "DimMismatch",
            NfError::PivotZero { .. } => "PivotZero",
            NfError::TripleInvalid => "TripleInvalid",
            NfError::TrickPrecondition { .. } => "TrickPrecondition",
            NfError::BadRange(_) => "BadRange",
            NfError::Syntax(_) => "Syntax",
            NfError::DegreeTooHigh { .. } => "DegreeTooHigh",
            NfError::Internal(_) => "Internal",
        }
    }
}

impl fmt::Display for NfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NfError::NonPrime(p) => write!(f, "{p} is not prime"),
            NfError::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            NfError::CapExceeded { required, cap } => {
                write!(f, "size {required} exceeds the configured cap {cap}")
            }
            NfError::NotDicksonPair { q, m, reason } => {
                write!(f, "({q}, {m}) is not a Dickson pair: {reason}")
            }
            NfError::ZeroInverse => write!(f, "zero has no multiplicative inverse"),
            NfError::ZeroArgument => write!(f, "discrete log of zero is undefined"),
            NfError::FullyDistributive => write!(
                f,
                "multiplication is fully distributive (grade 1); no right-distributivity failure exists"
            ),
            NfError::DimMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            NfError::PivotZero { row, col } => {
                write!(f, "entry at row {row}, column {col} must be non-zero")
            }
            NfError::TripleInvalid => {
                write!(f, "triple does not witness a right-distributivity failure")
            }
            NfError::TrickPrecondition { col } => write!(
                f,
                "column {col} left of the working column still has two non-zero entries"
            ),
            NfError::BadRange(msg) => write!(f, "argument out of range: {msg}"),
            NfError::Syntax(msg) => write!(f, "syntax error: {msg}"),
            NfError::DegreeTooHigh { power, degree } => {
                write!(f, "power x^{power} is out of range for extension degree {degree}")
            }
            NfError::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl Error for NfError {}
