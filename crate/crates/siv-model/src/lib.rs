//! Ground-state model of the negatively charged silicon-vacancy center in diamond,
//! restricted to the 8-dimensional manifold spanned by orbital {+,-}, electron spin
//! {up,down} and a spin-1/2 29Si nuclear spin.
//!
//! Conventions used throughout the workspace:
//! - product basis |orbital> (x) |spin> (x) |nuclear>, index = 4*[o=-] + 2*[s=down] + [n=down]
//! - all Hamiltonian entries are ordinary frequencies in Hz; the factor 2*pi enters
//!   only inside propagators
//! - rates are 1/s, temperatures K, fields T

pub mod constants;
mod error;
mod field;
mod hamiltonian;
mod operators;
mod params;
mod phonon;
mod spectrum;
mod thermal;
mod transitions;

pub use error::ModelError;
pub use field::MagneticField;
pub use hamiltonian::build_ground_hamiltonian;
pub use operators::{
    kron3, op_iv, op_lz, op_lz_sz, op_orbital_flip, op_orbital_flip_im, op_sv, nuclear_along,
    spin_along, OperatorMatrix, DIM,
};
pub use params::SivParameters;
pub use phonon::{
    bose_occupation, calibrate_gamma0, phonon_channels, phonon_jump_operators, phonon_rates,
    spin_preserved, total_spin_flip_rate, PhononChannel,
};
pub use spectrum::{diagonalize, Branch, EnergySpectrum, NuclearLabel, SpinLabel, StateLabel};
pub use thermal::{thermal_populations, thermal_state};
pub use transitions::{nuclear_preserving, odmr_transitions, transverse_axis, LineKind, OdmrLine};
