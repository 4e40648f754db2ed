//! Scripted measurement protocols on the ground-state spin model: resonance
//! scans, driven and free evolution, recovery and temperature sweeps.
//!
//! Every scan runs off one shared [`ProtocolConfig`] (field at 0.1 T tilted
//! 109 degrees off axis, strain tuned for a 54 MHz line separation, pump and
//! drive calibrations) and returns a [`SweepResult`]: sorted abscissa, finite
//! observable columns, full configuration echo. Results are deterministic;
//! rerunning a scan reproduces it bit for bit.

mod config;
mod driver;
mod error;
mod fidelity;
mod odmr;
mod rabi;
mod ramsey;
mod rate_eq;
mod sweep;
mod t1;
mod temperature;

pub use config::{ProtocolConfig, Setup, OPERATING_STRAIN_ALPHA};
pub use error::ExperimentError;
pub use fidelity::{initialization_fidelity, pump_steady_fidelity, spin_down_lower_population};
pub use odmr::{default_odmr_sweep, odmr_scan, odmr_scan_with_duration, odmr_vs_field};
pub use rabi::{default_rabi_sweep, rabi_detuning_scan, rabi_duration_scan, rabi_power_scan};
pub use ramsey::{
    default_ramsey_sweep, fit_ramsey_fringes, ramsey_scan, FringeComponent, RamseyCarrier,
    RamseyFit, POST_RAMSEY_WAIT,
};
pub use rate_eq::{gamma0_for_spin_t1, rate_equation_ratio_curve, rate_equation_spin_t1};
pub use sweep::{Column, SweepResult, SweepSpec};
pub use t1::{default_t1_sweep, t1_recovery_scan};
pub use temperature::temperature_sweep;
