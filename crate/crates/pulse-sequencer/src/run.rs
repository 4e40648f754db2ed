use lindblad_engine::{apply_propagator, evolve, propagator, steady_state, DensityMatrix};
use siv_model::{EnergySpectrum, SivParameters};

use crate::compile::{compile_segment_in_frame, CompiledSegment};
use crate::{PulseSegment, PulseSequence, SequencerError};

/// Where a segment begins inside a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentMarker {
    pub segment_index: usize,
    /// Index into the trace arrays of the segment's first (leading-edge) sample.
    pub sample_index: usize,
    pub optical: bool,
}

/// Sampled fluorescence and per-eigenstate populations of one sequence run.
///
/// Populations are reported in the eigenbasis of the spectrum the sequence was run
/// against; the initial state passed to [`run_sequence`] uses the same basis.
#[derive(Debug, Clone)]
pub struct SimulationTrace {
    pub times: Vec<f64>,
    /// Gamma_pump times the summed source populations during optical segments,
    /// zero elsewhere. A sample on a boundary belongs to the segment that starts
    /// there, so it carries that segment's leading edge.
    pub fluorescence: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
    pub markers: Vec<SegmentMarker>,
}

const POPULATION_SLACK: f64 = 1e-9;

impl SimulationTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn validate(&self) -> Result<(), SequencerError> {
        if self.times.len() != self.fluorescence.len()
            || self.times.len() != self.populations.len()
        {
            return Err(SequencerError::Protocol("trace arrays have mismatched lengths"));
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SequencerError::Protocol("trace times must be strictly increasing"));
        }
        for pops in &self.populations {
            let sum: f64 = pops.iter().sum();
            if (sum - 1.0).abs() > POPULATION_SLACK
                || pops.iter().any(|&p| !(-POPULATION_SLACK..=1.0 + POPULATION_SLACK).contains(&p))
            {
                return Err(SequencerError::Protocol("trace populations out of bounds"));
            }
        }
        for m in &self.markers {
            if m.sample_index >= self.times.len() {
                return Err(SequencerError::Protocol("marker points past the trace"));
            }
        }
        Ok(())
    }
}

fn leading_fluorescence(c: &CompiledSegment, rho: &DensityMatrix) -> f64 {
    if !c.optical {
        return 0.0;
    }
    let pops = rho.populations();
    c.pump_rate * c.pump_sources.iter().map(|&s| pops[s]).sum::<f64>()
}

/// Evolve an initial state through every segment of a sequence in one shared
/// rotating frame, sampling at the sequence resolution.
///
/// `rho0` is expressed in the eigenbasis of `spectrum`; start from
/// `DensityMatrix::from_populations(&thermal_populations(spectrum, t)?)` for a
/// thermal start. The first trace sample is the initial state at t = 0.
pub fn run_sequence(
    seq: &PulseSequence,
    rho0: &DensityMatrix,
    spectrum: &EnergySpectrum,
    params: &SivParameters,
    temperature: f64,
) -> Result<SimulationTrace, SequencerError> {
    seq.validate()?;
    let frame = seq.carrier().unwrap_or(0.0);
    let res = seq.sample_resolution;

    let mut rho = rho0.clone();
    let mut times = vec![0.0_f64];
    let mut fluorescence = vec![0.0_f64];
    let mut populations = vec![rho.populations()];
    let mut markers = Vec::with_capacity(seq.segments.len());
    let mut t = 0.0_f64;

    for (segment_index, seg) in seq.segments.iter().enumerate() {
        let compiled = compile_segment_in_frame(seg, spectrum, params, temperature, frame)?;
        let boundary = times.len() - 1;
        markers.push(SegmentMarker { segment_index, sample_index: boundary, optical: compiled.optical });
        // boundary sample belongs to the segment starting here
        fluorescence[boundary] = leading_fluorescence(&compiled, &rho);

        let duration = seg.duration();
        if duration == 0.0 {
            continue;
        }
        let steps = (duration / res + 1e-9).floor() as usize;
        let remainder = duration - steps as f64 * res;
        if steps > 0 {
            let prop = propagator(&compiled.model, res)?;
            for _ in 0..steps {
                rho = apply_propagator(&prop, &rho)?;
                t += res;
                times.push(t);
                fluorescence.push(leading_fluorescence(&compiled, &rho));
                populations.push(rho.populations());
            }
        }
        if remainder > res * 1e-6 {
            rho = evolve(&compiled.model, &rho, remainder)?;
            t += remainder;
            times.push(t);
            fluorescence.push(leading_fluorescence(&compiled, &rho));
            populations.push(rho.populations());
        }
    }

    let trace = SimulationTrace { times, fluorescence, populations, markers };
    debug_assert!(trace.validate().is_ok());
    Ok(trace)
}

/// Leading-edge fluorescence of the last optical segment over that of the first.
///
/// For a pump-wait-pump protocol from a thermal start this is the recovered
/// bright-state fraction, in [0, 1] up to rounding.
pub fn peak_ratio(trace: &SimulationTrace) -> Result<f64, SequencerError> {
    let optical: Vec<&SegmentMarker> = trace.markers.iter().filter(|m| m.optical).collect();
    if optical.len() < 2 {
        return Err(SequencerError::Protocol("peak ratio needs at least two optical segments"));
    }
    let first = trace.fluorescence[optical[0].sample_index];
    let last = trace.fluorescence[optical[optical.len() - 1].sample_index];
    if !(first > 0.0) {
        return Err(SequencerError::DegenerateSignal);
    }
    Ok(last / first)
}

/// Peak ratio without building a trace: one propagation per segment. Sweeps call
/// this; it agrees with `peak_ratio(run_sequence(..))` to rounding because the
/// leading edges are evaluated at exact segment boundaries either way.
pub fn sequence_peak_ratio(
    seq: &PulseSequence,
    rho0: &DensityMatrix,
    spectrum: &EnergySpectrum,
    params: &SivParameters,
    temperature: f64,
) -> Result<f64, SequencerError> {
    seq.validate()?;
    let frame = seq.carrier().unwrap_or(0.0);
    let mut rho = rho0.clone();
    let mut edges: Vec<f64> = Vec::new();
    for seg in &seq.segments {
        let compiled = compile_segment_in_frame(seg, spectrum, params, temperature, frame)?;
        if compiled.optical {
            edges.push(leading_fluorescence(&compiled, &rho));
        }
        rho = evolve(&compiled.model, &rho, seg.duration())?;
    }
    if edges.len() < 2 {
        return Err(SequencerError::Protocol("peak ratio needs at least two optical segments"));
    }
    if !(edges[0] > 0.0) {
        return Err(SequencerError::DegenerateSignal);
    }
    Ok(edges[edges.len() - 1] / edges[0])
}

/// The state the sample relaxes to between shots: the fixed point of the free
/// (phonons-only) generator. This differs from the Gibbs distribution at the
/// percent level because the relaxation network exchanges population across
/// branches at a single phonon frequency and does not thermalize the intra-branch
/// Zeeman splittings directly. Protocols that start here keep the peak ratio in
/// [0, 1]; a Gibbs start can overshoot 1 by that same percent-level mismatch.
///
/// Requires a dissipative model (gamma0_orbital > 0), otherwise every state is
/// stationary and the engine reports a non-unique steady state.
pub fn equilibrium_state(
    spectrum: &EnergySpectrum,
    params: &SivParameters,
    temperature: f64,
) -> Result<DensityMatrix, SequencerError> {
    let wait = PulseSegment::Wait { duration: 0.0 };
    let compiled = compile_segment_in_frame(&wait, spectrum, params, temperature, 0.0)?;
    Ok(steady_state(&compiled.model)?)
}

/// Quarter period of a fitted effective Rabi frequency: the pi/2-pulse duration.
pub fn half_pi_duration(f_eff: f64) -> f64 {
    0.25 / f_eff
}

/// Half period: the pi-pulse duration.
pub fn pi_duration(f_eff: f64) -> f64 {
    0.5 / f_eff
}
