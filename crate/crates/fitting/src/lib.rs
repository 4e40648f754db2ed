//! Nonlinear least-squares fitting for the curve shapes the simulated
//! experiments produce: exponential recoveries, Lorentzian resonance peaks,
//! damped single and double cosines, the generalized Rabi dispersion, plain
//! lines, and the Hamiltonian-model fit of resonance frequencies versus field.
//!
//! All iterative fits share one damped least-squares core with a
//! central-difference Jacobian, and every entry point sorts its input by
//! abscissa first, so results do not depend on sample order.

mod error;
mod forms;
mod jacobian;
mod lm;
mod model_fit;
mod result;
mod seed;

pub use error::FitError;
pub use forms::{
    damped_cosine_model, exp_recovery_model, fit_damped_cosine, fit_double_damped_cosine,
    fit_exp_recovery, fit_generalized_rabi, fit_linear, fit_lorentzian_peaks,
    generalized_rabi_model, lorentzian_model,
};
pub use jacobian::{numerical_jacobian, JACOBIAN_REL_STEP};
pub use lm::{levenberg_marquardt, LmOutcome, MAX_ITERATIONS};
pub use model_fit::fit_a_parallel;
pub use result::FitResult;
