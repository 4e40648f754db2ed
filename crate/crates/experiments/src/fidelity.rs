use crate::driver::{apply, Stage};
use crate::{ExperimentError, Setup};
use lindblad_engine::{steady_state, DensityMatrix};
use pulse_sequencer::PulseSegment;
use siv_model::{Branch, SpinLabel};

/// Fraction of population parked in the lower-branch spin-down pair.
pub fn spin_down_lower_population(setup: &Setup, rho: &DensityMatrix) -> f64 {
    let pops = rho.populations();
    setup
        .spectrum
        .labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.branch == Branch::Lower && l.spin == SpinLabel::Down)
        .map(|(k, _)| pops[k])
        .sum()
}

/// Initialization fidelity of a single pump played on the Gibbs state: the
/// spin-down lower-branch population when the pulse ends. Phonon repumping
/// caps this well below 1 at finite temperature.
pub fn initialization_fidelity(
    setup: &Setup,
    pump_rate: f64,
    pump_duration: f64,
) -> Result<f64, ExperimentError> {
    let seg = PulseSegment::OpticalPump { rate: pump_rate, duration: pump_duration };
    let stage = Stage::new(setup, &seg, 0.0)?;
    let start = setup.thermal_start()?;
    let finish = if pump_duration > 0.0 {
        apply(&stage.propagator(pump_duration)?, &start)?
    } else {
        start
    };
    Ok(spin_down_lower_population(setup, &finish))
}

/// Fidelity ceiling of an endless pump: evaluated on the fixed point of the
/// pump-plus-phonon model.
pub fn pump_steady_fidelity(setup: &Setup, pump_rate: f64) -> Result<f64, ExperimentError> {
    let seg = PulseSegment::OpticalPump { rate: pump_rate, duration: 1e-9 };
    let stage = Stage::new(setup, &seg, 0.0)?;
    let fixed = steady_state(&stage.compiled.model)?;
    Ok(spin_down_lower_population(setup, &fixed))
}
