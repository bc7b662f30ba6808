use thiserror::Error;

/// Errors produced by the disc, filter, ripple, and recognition stages.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RpnError {
    /// A parameter failed validation. `field` names the offending field.
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("disc radius {radius} does not fit a {width}x{height} frame")]
    RadiusExceedsFrame {
        radius: f64,
        width: usize,
        height: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    /// The temporal pattern carries no activity (inh0 = 0).
    #[error("temporal pattern is empty (no initial activation)")]
    EmptyPattern,

    /// L equals the ring count, so the active window has zero length.
    #[error("degenerate time window: L = {lag} with {rings} rings")]
    DegenerateWindow { lag: usize, rings: usize },

    #[error("similarity undefined: {0}")]
    UndefinedSimilarity(&'static str),

    #[error("template label {0:?} already enrolled")]
    DuplicateLabel(String),

    #[error("bundle shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("template store is empty")]
    EmptyStore,

    #[error("unsupported store schema {0:?}")]
    Schema(String),

    #[error("serialization: {0}")]
    Serde(String),
}

impl RpnError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        RpnError::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

impl From<serde_json::Error> for RpnError {
    fn from(e: serde_json::Error) -> Self {
        RpnError::Serde(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, RpnError>;
