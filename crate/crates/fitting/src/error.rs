use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least {needed} data points, got {got}")]
    NotEnoughData { needed: usize, got: usize },
    #[error("abscissa and ordinate lengths differ: {x} vs {y}")]
    LengthMismatch { x: usize, y: usize },
    #[error("seeding failed: {0}")]
    Seeding(String),
    #[error("design matrix is rank deficient: {0}")]
    RankDeficient(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("model evaluation failed: {0}")]
    Model(String),
}
