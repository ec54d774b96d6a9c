use thiserror::Error;

use crate::poly::BiPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("expected a tuple of {expected} polynomials, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("unsupported module expression: {0}")]
    UnsupportedExpr(String),

    #[error("not an L-module of order {s}: a nonzero element has vanishing first {s} coordinates")]
    NotAnLModule { s: usize, witness: BiPoly },

    #[error("operator coefficients are not pinned down at layers {free_layers:?}")]
    Underdetermined { free_layers: Vec<usize> },

    #[error("no operator of the required form fits the module at layer {layer}")]
    Inconsistent { layer: usize },

    #[error("the given basis is not closed under partial differentiation")]
    NotTranslationInvariant,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("value out of supported range: {0}")]
    RangeExceeded(String),

    #[error("side condition {condition} fails at n = {n}")]
    ThresholdUnmet { n: usize, condition: String },

    #[error("postcondition violated: {0}")]
    Postcondition(String),

    #[error("computation cancelled")]
    Cancelled,
}

impl Error {
    /// Stable machine-readable discriminator used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::UnsupportedExpr(_) => "unsupported_expr",
            Error::NotAnLModule { .. } => "not_an_l_module",
            Error::Underdetermined { .. } => "underdetermined",
            Error::Inconsistent { .. } => "inconsistent",
            Error::NotTranslationInvariant => "not_translation_invariant",
            Error::NotNilpotent => "not_nilpotent",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::RangeExceeded(_) => "range_exceeded",
            Error::ThresholdUnmet { .. } => "threshold_unmet",
            Error::Postcondition(_) => "postcondition",
            Error::Cancelled => "cancelled",
        }
    }
}
