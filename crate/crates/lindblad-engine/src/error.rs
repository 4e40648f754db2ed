use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("operator dimension mismatch: expected {expected}x{expected}, found {found_rows}x{found_cols}")]
    DimensionMismatch { expected: usize, found_rows: usize, found_cols: usize },

    #[error("collapse rate must be non-negative, got {0}")]
    NegativeRate(f64),

    #[error("invalid density matrix: {invariant} violated, measured {value:e}")]
    InvalidDensity { invariant: &'static str, value: f64 },

    #[error("evolution duration must be non-negative, got {0}")]
    NegativeDuration(f64),

    #[error("integrator step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("numerical instability after evolution: {invariant} violated, measured {value:e}")]
    NumericalInstability { invariant: &'static str, value: f64 },

    #[error("integrator step too large: trace drifted by {drift:e} (limit 1e-6)")]
    StepTooLarge { drift: f64 },

    #[error("steady state is not unique: Liouvillian kernel has dimension {nullity}")]
    NonUniqueSteadyState { nullity: usize },

    #[error("Liouvillian kernel contains no trace-one state (kernel vector is traceless)")]
    TracelessKernel,
}
