use thiserror::Error;

use crate::epistemic::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mixed modulus or length: expected Z_{expected}^{len}, found Z_{found}^{found_len}")]
    MixedModulus {
        expected: u64,
        len: usize,
        found: u64,
        found_len: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),
    #[error("enumeration of {size} elements exceeds the guard of {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("observable is identically zero")]
    ZeroObservable,
    #[error("outcome {outcome} is not attainable (degeneracy {degeneracy} does not divide it)")]
    InvalidOutcome { outcome: u64, degeneracy: u64 },
    #[error("outcome assignment is inconsistent with the measured generators")]
    InconsistentOutcomes,
    #[error("observable is fine-graining; no coarse decomposition exists")]
    NotCoarse,
    #[error("measurement does not commute with the state")]
    NotCommuting,
    #[error("measurement contains a coarse-graining generator")]
    CoarseGenerator,
    #[error("generators are not pairwise commuting")]
    NotIsotropic,
    #[error("outcome has probability zero")]
    ImpossibleOutcome,
    #[error("dimension {0} is even; only odd dimensions are supported here")]
    EvenDimension(u64),
    #[error("stabilizer group contains a nontrivial multiple of the identity")]
    Inconsistent,
    #[error("operator is not a Hermitian idempotent")]
    NotProjector,
    #[error("invalid state: {0}")]
    InvalidState(Violation),
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("system index {index} at byte {offset} is outside 1..={n}")]
    IndexOutOfRange { index: u64, offset: usize, n: usize },
    #[error("malformed document: {0}")]
    Document(String),
}

impl Error {
    /// Stable numeric code, shared with the C interface.
    pub fn code(&self) -> i32 {
        match self {
            Error::MixedModulus { .. } => 10,
            Error::DimensionMismatch { .. } => 11,
            Error::InvalidModulus(_) => 12,
            Error::TooLarge { .. } => 13,
            Error::ZeroObservable => 20,
            Error::InvalidOutcome { .. } => 21,
            Error::InconsistentOutcomes => 22,
            Error::NotCoarse => 23,
            Error::NotCommuting => 24,
            Error::CoarseGenerator => 25,
            Error::NotIsotropic => 26,
            Error::ImpossibleOutcome => 30,
            Error::EvenDimension(_) => 31,
            Error::Inconsistent => 32,
            Error::NotProjector => 33,
            Error::InvalidState(_) => 40,
            Error::Syntax { .. } => 50,
            Error::IndexOutOfRange { .. } => 51,
            Error::Document(_) => 60,
        }
    }
}
