use thiserror::Error;

/// Errors shared across the whole engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KwError {
    #[error("jet value is singular (|value| = {magnitude:.3e})")]
    SingularValue { magnitude: f64 },

    #[error("metric is singular (|det| = {det_magnitude:.3e})")]
    SingularMetric { det_magnitude: f64 },

    #[error("wedge degree overflow: {left} + {right} > 4")]
    DegreeOverflow { left: usize, right: usize },

    #[error("form degrees differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("form carries no derivative data (jet order 0)")]
    OrderExhausted,

    #[error("projected metric fails the nondegeneracy gate (|det| = {det_magnitude:.3e})")]
    DegenerateProjection { det_magnitude: f64 },

    #[error("basis transform is singular (|det| = {det_magnitude:.3e})")]
    SingularTransform { det_magnitude: f64 },

    #[error("para-Hermitian structures require neutral signature (2,2)")]
    UnsupportedSignature,

    #[error("matrix is not a valid {kind} structure: {reason}")]
    InvalidStructure { kind: &'static str, reason: String },

    #[error("metric jet is not compatible with J (max deviation {deviation:.3e})")]
    IncompatibleMetric { deviation: f64 },

    #[error("random model generation exhausted {0} retries")]
    RetriesExhausted(u32),
}

pub type Result<T> = std::result::Result<T, KwError>;
