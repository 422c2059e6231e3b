//! Crate error type.

/// Errors reported by constructors, samplers and residual harnesses.
///
/// Scalar payloads are carried as `f64` regardless of the working precision;
/// they are diagnostics, not data.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("grid axis {axis} needs at least {min} points, got {got}")]
    GridTooSmall { axis: usize, min: usize, got: usize },

    #[error("grid spacing on axis {axis} must be strictly positive")]
    BadSpacing { axis: usize },

    #[error("grid must have 1 to 3 axes, got {got}")]
    BadRank { got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("time phase requires a unit quaternion amplitude, |Λ₀| = {norm}")]
    NonUnitPhase { norm: f64 },

    #[error("constraint {tag} violated, residual {residual:.6e}")]
    ConstraintViolated { tag: &'static str, residual: f64 },

    #[error("closed form unavailable: {reason}")]
    ClosedFormUnavailable { reason: &'static str },

    #[error("zero field has no residual normalization")]
    ZeroField,

    #[error("evanescent regime: total energy {energy} <= step height {v0}")]
    EvanescentRegime { energy: f64, v0: f64 },

    #[error("no propagating mode: transverse wave numbers exhaust the total energy")]
    NoPropagation,
}
