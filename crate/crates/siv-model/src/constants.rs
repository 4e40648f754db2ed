//! Physical constants, CODATA 2018 exact values.

/// Planck constant, J s.
pub const H_PLANCK: f64 = 6.62607015e-34;

/// Boltzmann constant, J/K.
pub const K_BOLTZMANN: f64 = 1.380649e-23;
