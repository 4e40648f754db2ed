//! Optical pumping and the pump-wait-pump peak-ratio observable.

use lindblad_engine::DensityMatrix;
use pulse_sequencer::{
    equilibrium_state, peak_ratio, pi_duration, run_sequence, sequence_peak_ratio, PulseSegment,
    PulseSequence, SequencerError,
};
use siv_model::{
    build_ground_hamiltonian, diagonalize, nuclear_preserving, odmr_transitions,
    thermal_populations, EnergySpectrum, MagneticField, SivParameters,
};

const PUMP_RATE: f64 = 5e7;
const PUMP_LEN: f64 = 100e-9;
const TEMP: f64 = 3.6;

fn operating_point(phonons: bool) -> (EnergySpectrum, SivParameters) {
    let params = SivParameters {
        strain_alpha: 9382671233.057236,
        gamma0_orbital: if phonons {
            SivParameters::default().gamma0_orbital
        } else {
            0.0
        },
        ..SivParameters::default()
    };
    let field = MagneticField::from_degrees(0.1, 109.0, 0.0);
    let h = build_ground_hamiltonian(&params, &field).unwrap();
    let spec = diagonalize(&h, &params).unwrap();
    (spec, params)
}

fn thermal(spec: &EnergySpectrum) -> DensityMatrix {
    DensityMatrix::from_populations(&thermal_populations(spec, TEMP).unwrap()).unwrap()
}

/// Relaxed start for phonons-on protocols; close to (but not exactly) thermal.
fn relaxed(spec: &EnergySpectrum, params: &SivParameters) -> DensityMatrix {
    equilibrium_state(spec, params, TEMP).unwrap()
}

fn pump(duration: f64) -> PulseSegment {
    PulseSegment::OpticalPump { rate: PUMP_RATE, duration }
}

#[test]
fn pump_empties_sources_exponentially_at_the_pump_rate() {
    // no phonons: nothing refills the bright states, so their summed population is
    // a pure exponential and fluorescence is proportional to it
    let (spec, params) = operating_point(false);
    let rho0 = thermal(&spec);
    let seq = PulseSequence::new(vec![pump(150e-9)]).unwrap();
    let trace = run_sequence(&seq, &rho0, &spec, &params, TEMP).unwrap();
    trace.validate().unwrap();

    let sources: Vec<usize> = {
        let c = pulse_sequencer::compile_segment(&pump(1e-9), &spec, &params, TEMP).unwrap();
        c.pump_sources
    };
    let s0: f64 = sources.iter().map(|&s| trace.populations[0][s]).sum();
    assert!(s0 > 0.1, "thermal state should populate the bright states");
    for (i, &t) in trace.times.iter().enumerate() {
        let s: f64 = sources.iter().map(|&k| trace.populations[i][k]).sum();
        let expect = s0 * (-PUMP_RATE * t).exp();
        assert!((s - expect).abs() < 1e-9, "t={t}: source sum {s} vs {expect}");
        assert!((trace.fluorescence[i] - PUMP_RATE * s).abs() < 1e-9 * PUMP_RATE);
    }
}

#[test]
fn fluorescence_decays_monotonically_after_the_leading_edge() {
    let (spec, params) = operating_point(true);
    let rho0 = relaxed(&spec, &params);
    let seq = PulseSequence::new(vec![pump(200e-9)]).unwrap();
    let trace = run_sequence(&seq, &rho0, &spec, &params, TEMP).unwrap();
    let f = &trace.fluorescence;
    assert!(f[0] > 0.0);
    for w in f.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-12), "fluorescence must not rise: {} -> {}", w[0], w[1]);
    }
    // pumping beats thermal refill by orders of magnitude, so the tail is deep
    assert!(f[f.len() - 1] < 0.2 * f[0]);
}

#[test]
fn long_wait_rethermalizes_to_unit_ratio_within_2_percent() {
    let (spec, params) = operating_point(true);
    let rho0 = relaxed(&spec, &params);
    let seq =
        PulseSequence::new(vec![pump(PUMP_LEN), PulseSegment::Wait { duration: 3e-6 }, pump(PUMP_LEN)])
            .unwrap();
    let ratio = sequence_peak_ratio(&seq, &rho0, &spec, &params, TEMP).unwrap();
    assert!((ratio - 1.0).abs() < 0.02, "ratio {ratio}");
    assert!(ratio <= 1.0 + 1e-6);
}

#[test]
fn pi_pulse_recovers_more_signal_than_waiting() {
    let (spec, params) = operating_point(true);
    let rho0 = thermal(&spec);
    let lines = nuclear_preserving(&odmr_transitions(&spec).unwrap());
    let line = if lines[0].strength >= lines[1].strength { lines[0] } else { lines[1] };
    let eta = 2.0 * line.strength.sqrt();
    let f_eff = 15e6;
    let tau = pi_duration(f_eff);

    let with_pi = PulseSequence::new(vec![
        pump(PUMP_LEN),
        PulseSegment::MicrowaveDrive {
            carrier: line.frequency,
            rabi_amplitude: f_eff / eta,
            phase: 0.0,
            duration: tau,
        },
        pump(PUMP_LEN),
    ])
    .unwrap();
    let without = PulseSequence::new(vec![
        pump(PUMP_LEN),
        PulseSegment::Wait { duration: tau },
        pump(PUMP_LEN),
    ])
    .unwrap();

    let r_pi = sequence_peak_ratio(&with_pi, &rho0, &spec, &params, TEMP).unwrap();
    let r_wait = sequence_peak_ratio(&without, &rho0, &spec, &params, TEMP).unwrap();
    assert!(
        r_pi > r_wait + 0.1,
        "pi pulse must return population to the bright state: {r_pi} vs {r_wait}"
    );
}

#[test]
fn ideal_pumping_with_zero_wait_leaves_no_signal() {
    // no phonons means gamma_up = 0: after a deep first pump nothing comes back
    let (spec, params) = operating_point(false);
    let rho0 = thermal(&spec);
    let seq = PulseSequence::new(vec![
        pump(500e-9),
        PulseSegment::Wait { duration: 0.0 },
        pump(500e-9),
    ])
    .unwrap();
    let fast = sequence_peak_ratio(&seq, &rho0, &spec, &params, TEMP).unwrap();
    assert!(fast >= 0.0);
    assert!(fast < 1e-6, "residual bright fraction {fast}");

    let trace = run_sequence(&seq, &rho0, &spec, &params, TEMP).unwrap();
    let slow = peak_ratio(&trace).unwrap();
    assert!((slow - fast).abs() < 1e-12);
}

#[test]
fn zero_wait_ratio_equals_the_unpumped_residual() {
    let (spec, params) = operating_point(false);
    let rho0 = thermal(&spec);
    for pump_len in [20e-9, 60e-9, 120e-9] {
        let seq = PulseSequence::new(vec![pump(pump_len), pump(pump_len)]).unwrap();
        let ratio = sequence_peak_ratio(&seq, &rho0, &spec, &params, TEMP).unwrap();
        let residual = (-PUMP_RATE * pump_len).exp();
        assert!(
            (ratio - residual).abs() < 1e-9,
            "pump {pump_len}: ratio {ratio} vs residual {residual}"
        );
    }
}

#[test]
fn ratios_stay_in_the_unit_interval_for_pump_wait_pump() {
    let (spec, params) = operating_point(true);
    let rho0 = relaxed(&spec, &params);
    for tau in [0.0, 50e-9, 200e-9, 1e-6] {
        let seq = PulseSequence::new(vec![
            pump(PUMP_LEN),
            PulseSegment::Wait { duration: tau },
            pump(PUMP_LEN),
        ])
        .unwrap();
        let r = sequence_peak_ratio(&seq, &rho0, &spec, &params, TEMP).unwrap();
        assert!((0.0..=1.0 + 1e-6).contains(&r), "tau={tau}: ratio {r}");
    }
}

#[test]
fn trace_and_fast_paths_agree() {
    let (spec, params) = operating_point(true);
    let rho0 = thermal(&spec);
    let lines = nuclear_preserving(&odmr_transitions(&spec).unwrap());
    let seq = PulseSequence::new(vec![
        pump(PUMP_LEN),
        PulseSegment::MicrowaveDrive {
            carrier: lines[0].frequency,
            rabi_amplitude: 20e6,
            phase: 0.0,
            duration: 40e-9,
        },
        PulseSegment::Wait { duration: 30e-9 },
        pump(PUMP_LEN),
    ])
    .unwrap();
    let trace = run_sequence(&seq, &rho0, &spec, &params, TEMP).unwrap();
    trace.validate().unwrap();
    let slow = peak_ratio(&trace).unwrap();
    let fast = sequence_peak_ratio(&seq, &rho0, &spec, &params, TEMP).unwrap();
    assert!((slow - fast).abs() < 1e-9, "{slow} vs {fast}");

    // populations stay physical along the whole trace
    for pops in &trace.populations {
        let sum: f64 = pops.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(pops.iter().all(|&p| (-1e-9..=1.0 + 1e-9).contains(&p)));
    }
}

#[test]
fn single_optical_segment_is_a_protocol_error() {
    let (spec, params) = operating_point(true);
    let rho0 = thermal(&spec);
    let seq = PulseSequence::new(vec![pump(PUMP_LEN)]).unwrap();
    assert!(matches!(
        sequence_peak_ratio(&seq, &rho0, &spec, &params, TEMP),
        Err(SequencerError::Protocol(_))
    ));
    let trace = run_sequence(&seq, &rho0, &spec, &params, TEMP).unwrap();
    assert!(matches!(peak_ratio(&trace), Err(SequencerError::Protocol(_))));
}
