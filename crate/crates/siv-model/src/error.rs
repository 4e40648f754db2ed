use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ModelError {
    #[error("parameter `{0}` is not finite")]
    NonFiniteParameter(&'static str),

    #[error("field magnitude must be >= 0, got {0}")]
    NegativeField(f64),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e} vs scale {scale:.3e})")]
    NotHermitian { asymmetry: f64, scale: f64 },

    #[error("temperature must be > 0 K, got {0}")]
    NonPositiveTemperature(f64),

    #[error("rate `{0}` must be >= 0, got {1}")]
    NegativeRate(&'static str, f64),

    #[error("eigenstate classification failed: {0}")]
    Classification(String),

    #[error("no inter-branch coupling weight from eigenstate {0}; cannot normalize jump rates")]
    DegenerateCoupling(usize),
}
