//! Shared plumbing for the scan drivers. Each scan evolves the same cached
//! propagators instead of recompiling the whole sequence per grid point; the
//! semantics match `pulse_sequencer::run_sequence` exactly (the integration
//! tests pin a few grid points against it).

use crate::{ExperimentError, Setup};
use lindblad_engine::{apply_propagator, propagator, DensityMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;
use pulse_sequencer::{compile_segment_in_frame, CompiledSegment, PulseSegment};

pub(crate) struct Stage {
    pub compiled: CompiledSegment,
}

impl Stage {
    /// Compile `segment` against the setup in the sequence-wide rotating frame.
    pub fn new(setup: &Setup, segment: &PulseSegment, frame: f64) -> Result<Self, ExperimentError> {
        let compiled = compile_segment_in_frame(
            segment,
            &setup.spectrum,
            &setup.config.params,
            setup.config.temperature,
            frame,
        )?;
        Ok(Stage { compiled })
    }

    pub fn propagator(&self, duration: f64) -> Result<DMatrix<Complex64>, ExperimentError> {
        Ok(propagator(&self.compiled.model, duration)?)
    }

    /// Instantaneous fluorescence at the leading edge of this segment.
    pub fn edge(&self, rho: &DensityMatrix) -> f64 {
        let pops = rho.populations();
        self.compiled.pump_rate * self.compiled.pump_sources.iter().map(|&k| pops[k]).sum::<f64>()
    }
}

pub(crate) fn apply(
    prop: &DMatrix<Complex64>,
    rho: &DensityMatrix,
) -> Result<DensityMatrix, ExperimentError> {
    Ok(apply_propagator(prop, rho)?)
}

/// Pump stage in the given frame, plus the state right after the first pump
/// and the leading-edge signal of a fresh shot. Pumping a coherence-free state
/// keeps it diagonal, so the result is valid in every rotating frame.
pub(crate) struct PumpedShot {
    pub pump: Stage,
    pub start_edge: f64,
    pub after_pump: DensityMatrix,
}

pub(crate) fn pumped_shot(setup: &Setup, frame: f64) -> Result<PumpedShot, ExperimentError> {
    let seg = PulseSegment::OpticalPump {
        rate: setup.config.pump_rate,
        duration: setup.config.pump_duration,
    };
    let pump = Stage::new(setup, &seg, frame)?;
    let rho0 = setup.shot_start()?;
    let start_edge = pump.edge(&rho0);
    if !(start_edge > 0.0) {
        return Err(ExperimentError::Protocol(
            "no fluorescence at the first pump edge; nothing to normalize against".into(),
        ));
    }
    let after_pump = apply(&pump.propagator(setup.config.pump_duration)?, &rho0)?;
    Ok(PumpedShot { pump, start_edge, after_pump })
}
