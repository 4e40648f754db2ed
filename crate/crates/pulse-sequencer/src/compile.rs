use nalgebra::DMatrix;
use num_complex::Complex64;

use lindblad_engine::LindbladModel;
use siv_model::{
    odmr_transitions, phonon_channels, phonon_rates, spin_along, transverse_axis, Branch,
    EnergySpectrum, ModelError, SivParameters, SpinLabel, DIM,
};

use crate::{PulseSegment, SequencerError};

/// Rotating-wave band: drive terms and carrier checks only consider transitions
/// within this window of the carrier. Everything further detuned rotates too fast
/// to matter at the amplitudes this crate is used with (tens of MHz).
pub const CARRIER_WINDOW: f64 = 10e9;

/// A segment lowered to a time-independent Lindblad generator, plus the bookkeeping
/// needed to turn populations into fluorescence.
///
/// Basis convention: the model lives in the eigenbasis of the spectrum it was
/// compiled against. States fed to the engine and populations read back are
/// per-eigenstate quantities; no product-basis rotation happens here.
#[derive(Debug, Clone)]
pub struct CompiledSegment {
    pub model: LindbladModel,
    /// True for optical-pump segments, including zero-rate ones.
    pub optical: bool,
    /// Fluorescence constant of proportionality; equals the pump rate.
    pub pump_rate: f64,
    /// Eigenstate indices whose population emits during this segment.
    pub pump_sources: Vec<usize>,
}

/// Compile one segment in its natural frame: a microwave segment rotates at its own
/// carrier, anything else stays in the lab frame. Sequences instead share a single
/// frame; see [`compile_segment_in_frame`].
pub fn compile_segment(
    segment: &PulseSegment,
    spectrum: &EnergySpectrum,
    params: &SivParameters,
    temperature: f64,
) -> Result<CompiledSegment, SequencerError> {
    compile_segment_in_frame(segment, spectrum, params, temperature, segment.carrier().unwrap_or(0.0))
}

/// Compile one segment in the rotating frame of `frame_carrier` (0 = lab frame).
///
/// The frame transformation U(t) = exp(-2*pi*i*t*f*Sigma), Sigma = diag(sigma_k),
/// shifts the Hamiltonian to diag(E_k - f*sigma_k) and multiplies every jump
/// operator |n><m| by a time-dependent phase, which dissipators are invariant
/// under; only the coherent part needs care. Wait segments therefore accumulate
/// coherence phase at the detuning, which is what makes Ramsey fringes come out at
/// delta rather than at the bare line frequency.
pub fn compile_segment_in_frame(
    segment: &PulseSegment,
    spectrum: &EnergySpectrum,
    params: &SivParameters,
    temperature: f64,
    frame_carrier: f64,
) -> Result<CompiledSegment, SequencerError> {
    segment.validate()?;
    params.validate().map_err(SequencerError::Model)?;

    let mut h = DMatrix::<Complex64>::zeros(DIM, DIM);
    for k in 0..DIM {
        h[(k, k)] = Complex64::new(spectrum.energies[k] - frame_carrier * spectrum.sigma(k), 0.0);
    }

    let mut collapse: Vec<(DMatrix<Complex64>, f64)> = Vec::new();
    if params.gamma0_orbital > 0.0 {
        let rates = phonon_rates(params, params.lambda_so, temperature)?;
        for ch in phonon_channels(spectrum, rates)? {
            collapse.push((unit_jump(ch.to, ch.from), ch.rate));
        }
    }
    if params.gamma_phi_extra > 0.0 {
        // one projector per eigenstate at rate g makes every coherence decay at g
        for k in 0..DIM {
            collapse.push((unit_jump(k, k), params.gamma_phi_extra));
        }
    }

    let mut optical = false;
    let mut pump_rate = 0.0;
    let mut pump_sources = Vec::new();

    match *segment {
        PulseSegment::Wait { .. } => {}
        PulseSegment::OpticalPump { rate, .. } => {
            optical = true;
            pump_rate = rate;
            for (source, target) in pump_pairs(spectrum)? {
                collapse.push((unit_jump(target, source), rate));
                pump_sources.push(source);
            }
        }
        PulseSegment::MicrowaveDrive { carrier, rabi_amplitude, phase, .. } => {
            check_carrier_in_band(spectrum, carrier)?;
            let sx = spin_along(transverse_axis(spectrum.spin_axis_lower));
            let sx_eig = spectrum.states.adjoint() * sx * &spectrum.states;
            let rot = Complex64::from_polar(1.0, phase);
            for j in 0..DIM {
                for k in (j + 1)..DIM {
                    if spectrum.labels[j].spin == spectrum.labels[k].spin {
                        continue;
                    }
                    // energies ascend with index, so (k, j) is the absorbing element
                    if (spectrum.energies[k] - spectrum.energies[j] - carrier).abs()
                        > CARRIER_WINDOW
                    {
                        continue;
                    }
                    let elem = Complex64::new(rabi_amplitude, 0.0) * sx_eig[(k, j)] * rot;
                    h[(k, j)] += elem;
                    h[(j, k)] += elem.conj();
                }
            }
        }
    }

    let model = LindbladModel::new(h, collapse)?;
    Ok(CompiledSegment { model, optical, pump_rate, pump_sources })
}

fn unit_jump(to: usize, from: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(DIM, DIM);
    m[(to, from)] = Complex64::new(1.0, 0.0);
    m
}

/// Optical pumping channels: each lower-branch spin-up eigenstate drains into the
/// lower-branch spin-down state of the same nuclear manifold.
fn pump_pairs(spectrum: &EnergySpectrum) -> Result<Vec<(usize, usize)>, SequencerError> {
    let lower = spectrum.branch_states(Branch::Lower);
    if lower.len() != 4 {
        return Err(ModelError::Classification(format!(
            "optical pumping expects 4 lower-branch states, found {}",
            lower.len()
        ))
        .into());
    }
    let ups: Vec<usize> =
        lower.iter().copied().filter(|&k| spectrum.labels[k].spin == SpinLabel::Up).collect();
    let downs: Vec<usize> =
        lower.iter().copied().filter(|&k| spectrum.labels[k].spin == SpinLabel::Down).collect();
    if ups.len() != 2 || downs.len() != 2 {
        return Err(ModelError::Classification(format!(
            "optical pumping expects a 2/2 spin split in the lower branch, found {} up / {} down",
            ups.len(),
            downs.len()
        ))
        .into());
    }
    let mut pairs = Vec::with_capacity(2);
    for &u in &ups {
        let mates: Vec<usize> = downs
            .iter()
            .copied()
            .filter(|&d| spectrum.labels[d].nuclear == spectrum.labels[u].nuclear)
            .collect();
        if mates.len() != 1 {
            return Err(ModelError::Classification(format!(
                "state {u} has {} same-nuclear spin-down partners, expected exactly 1",
                mates.len()
            ))
            .into());
        }
        pairs.push((u, mates[0]));
    }
    Ok(pairs)
}

fn check_carrier_in_band(
    spectrum: &EnergySpectrum,
    carrier: f64,
) -> Result<(), SequencerError> {
    let lines = odmr_transitions(spectrum)?;
    let nearest = lines
        .iter()
        .map(|l| l.frequency)
        .min_by(|a, b| (a - carrier).abs().total_cmp(&(b - carrier).abs()))
        .expect("odmr_transitions returns four lines");
    if (nearest - carrier).abs() > CARRIER_WINDOW {
        return Err(SequencerError::CarrierOutOfBand {
            carrier,
            nearest,
            window: CARRIER_WINDOW,
        });
    }
    Ok(())
}
