use thiserror::Error;

/// Errors produced by model construction and inference routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("system size must be in 1..={max}, got {got}")]
    SystemSize { got: usize, max: usize },

    #[error("expected {expected} entries for a size-{expected} system, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("multiplicity index must be in 1..={k}, got {j}")]
    Multiplicity { j: usize, k: usize },

    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },

    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("{name} must be positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },

    #[error("{name} must lie in [0, 1], got {value}")]
    OutsideUnit { name: &'static str, value: f64 },

    #[error("entries must sum to 1 within {tolerance}, got sum {sum}")]
    NotASimplex { sum: f64, tolerance: f64 },

    #[error("alpha factors are degenerate: every component is zero")]
    DegenerateAlpha,

    #[error("interval bounds are inverted: [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("hyperparameter box excludes every simplex point: {detail}")]
    InfeasibleBox { detail: String },

    #[error("expansion order must be in 0..={max}, got {got}")]
    ExpansionOrder { got: u32, max: u32 },

    #[error("optimizer setting {name} must be positive")]
    OptimizerSetting { name: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
