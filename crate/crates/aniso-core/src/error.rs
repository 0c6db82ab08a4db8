use alloc::string::String;

use crate::anchors;

/// Engine failure. Each variant maps to an anchor naming the rule whose premise failed.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not identifiable: {0}")]
    NotIdentifiable(String),
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
    #[error("not an intersection form: {0}")]
    NotAnIntersectionForm(String),
    #[error("incompatible spaces: {0}")]
    IncompatibleSpaces(String),
    #[error("slice index {k} out of range 1..={nu}")]
    BadSlice { k: usize, nu: usize },
    #[error("no interpolation rule: {0}")]
    NoInterpolationRule(String),
    #[error("closure from uncovered parent: {0}")]
    ClosureFromUncovered(String),
    #[error("infeasible range: {0}")]
    InfeasibleRange(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Rule the failure is attributed to.
    pub fn anchor(&self) -> &'static str {
        match self {
            Error::Unsupported(_) => anchors::INDEX_DEF,
            Error::NotIdentifiable(_) => anchors::HW,
            Error::HypothesisViolation(_) => anchors::MULT,
            Error::NotAnIntersectionForm(_) => anchors::CHAR_H,
            Error::IncompatibleSpaces(_) => anchors::SPACES_DEF,
            Error::BadSlice { .. } => anchors::EMB_PARTIAL,
            Error::NoInterpolationRule(_) => anchors::INTERP_COMPLEX_B,
            Error::ClosureFromUncovered(_) => anchors::MULT_REM_K,
            Error::InfeasibleRange(_) => anchors::LEMMA_REAL,
            Error::InvalidSpace(_) => anchors::SPACES_DEF,
            Error::InvalidArgument(_) => anchors::SPACES_DEF,
        }
    }

    /// Short machine name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Unsupported(_) => "Unsupported",
            Error::NotIdentifiable(_) => "NotIdentifiable",
            Error::HypothesisViolation(_) => "HypothesisViolation",
            Error::NotAnIntersectionForm(_) => "NotAnIntersectionForm",
            Error::IncompatibleSpaces(_) => "IncompatibleSpaces",
            Error::BadSlice { .. } => "BadSlice",
            Error::NoInterpolationRule(_) => "NoInterpolationRule",
            Error::ClosureFromUncovered(_) => "ClosureFromUncovered",
            Error::InfeasibleRange(_) => "InfeasibleRange",
            Error::InvalidSpace(_) => "InvalidSpace",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
