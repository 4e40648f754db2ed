//! Lindblad master-equation engine.
//!
//! States are [`DensityMatrix`] values (Hermitian, unit-trace, positive within
//! tolerance); generators are [`LindbladModel`] values holding a Hamiltonian in Hz
//! and collapse operators with rates in 1/s. The equation of motion is
//!
//! ```text
//! drho/dt = -2*pi*i [H, rho] + sum_k gamma_k (C_k rho C_k^dag - 1/2 {C_k^dag C_k, rho})
//! ```
//!
//! with the 2*pi applied here, once, so every frequency elsewhere stays in plain Hz.
//! Primary propagation is exact (superoperator exponential, cheap at dimension 8);
//! [`evolve_rk4`] integrates the same generator at the density-matrix level and
//! serves as an independent numerical oracle.

mod density;
mod error;
mod expm;
mod model;
mod propagate;
mod superop;

pub use density::DensityMatrix;
pub use error::EngineError;
pub use expm::expm;
pub use model::LindbladModel;
pub use propagate::{apply_propagator, evolve, evolve_rk4, propagator, steady_state};
pub use superop::{liouvillian, unvectorize, vectorize};
