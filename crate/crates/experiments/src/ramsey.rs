use crate::driver::{apply, pumped_shot, Stage};
use crate::{Column, ExperimentError, Setup, SweepResult, SweepSpec};
use fitting::levenberg_marquardt;
use nalgebra::DVector;
use pulse_sequencer::{half_pi_duration, PulseSegment};
use std::f64::consts::TAU;

/// Settling time between the second half-pulse and the readout pump.
pub const POST_RAMSEY_WAIT: f64 = 10e-9;

/// Where to park the carrier relative to the two main lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RamseyCarrier {
    /// Midway between the lines: both fringes beat at half the separation.
    Symmetric,
    /// Two thirds of the way up: fringes at 2/3 and 1/3 of the separation.
    Asymmetric,
    /// Caller-chosen carrier in Hz.
    Explicit(f64),
}

impl RamseyCarrier {
    pub fn frequency(&self, setup: &Setup) -> f64 {
        let np = setup.nuclear_preserving_lines();
        let (low, high) = (np[0].frequency, np[1].frequency);
        match *self {
            RamseyCarrier::Symmetric => 0.5 * (low + high),
            RamseyCarrier::Asymmetric => low + 2.0 / 3.0 * (high - low),
            RamseyCarrier::Explicit(f) => f,
        }
    }

    /// Beat frequencies the protocol prepares, one per line, ascending.
    pub fn expected_fringes(&self, setup: &Setup) -> Vec<f64> {
        let carrier = self.frequency(setup);
        let mut f: Vec<f64> = setup
            .nuclear_preserving_lines()
            .iter()
            .map(|l| (carrier - l.frequency).abs())
            .collect();
        f.sort_by(f64::total_cmp);
        f.dedup_by(|a, b| (*a - *b).abs() < 1.0);
        f
    }
}

/// Free-evolution scan: pump, half pulse, variable wait, half pulse, readout.
/// Fringes beat at the carrier-to-line detunings and decay with the inter-pulse
/// coherence time.
pub fn ramsey_scan(
    setup: &Setup,
    sweep: &SweepSpec,
    carrier: RamseyCarrier,
) -> Result<SweepResult, ExperimentError> {
    let taus = sweep.values();
    let f_carrier = carrier.frequency(setup);
    let amp = setup.drive_amplitude(setup.strongest_line());
    let t_half = half_pi_duration(setup.config.rabi_effective);

    let shot = pumped_shot(setup, f_carrier)?;
    let pulse = PulseSegment::MicrowaveDrive {
        carrier: f_carrier,
        rabi_amplitude: amp,
        phase: 0.0,
        duration: t_half,
    };
    let half = Stage::new(setup, &pulse, f_carrier)?;
    let u_half = half.propagator(t_half)?;
    let wait = Stage::new(setup, &PulseSegment::Wait { duration: 0.0 }, f_carrier)?;
    let u_post = wait.propagator(POST_RAMSEY_WAIT)?;

    let opened = apply(&u_half, &shot.after_pump)?;
    let mut ratios = Vec::with_capacity(taus.len());
    for &tau in &taus {
        let mut rho = if tau > 0.0 { apply(&wait.propagator(tau)?, &opened)? } else { opened.clone() };
        rho = apply(&u_half, &rho)?;
        rho = apply(&u_post, &rho)?;
        ratios.push(shot.pump.edge(&rho) / shot.start_edge);
    }

    let result = SweepResult {
        experiment: "ramsey".into(),
        abscissa: Column::new("wait_s", taus),
        columns: vec![Column::new("peak_ratio", ratios)],
        metadata: setup.metadata(),
    };
    result.validate()?;
    Ok(result)
}

/// Default free-evolution grid: a few coherence times at a dozen samples per
/// fringe of the symmetric beat.
pub fn default_ramsey_sweep(_setup: &Setup) -> Result<SweepSpec, ExperimentError> {
    SweepSpec::new(0.0, 400e-9, 161)
}

/// One fringe component of a free-evolution fit.
#[derive(Debug, Clone, Copy)]
pub struct FringeComponent {
    pub frequency: f64,
    pub frequency_std_error: f64,
    pub amplitude: f64,
    pub phase: f64,
}

/// Joint fit of fringes on a drifting baseline:
/// y = c + b exp(-t/t_drift) + sum_i A_i cos(2 pi f_i t + phi_i) exp(-t/t2_star).
/// The slow exponential absorbs the branch repumping transient so the shared
/// fringe envelope reads out the inter-pulse coherence time cleanly.
#[derive(Debug, Clone)]
pub struct RamseyFit {
    pub baseline: f64,
    pub drift_amplitude: f64,
    pub drift_time: f64,
    pub t2_star: f64,
    pub t2_star_std_error: f64,
    pub components: Vec<FringeComponent>,
    pub residual_sum_of_squares: f64,
    pub converged: bool,
}

pub fn fit_ramsey_fringes(
    taus: &[f64],
    ratios: &[f64],
    seed_frequencies: &[f64],
) -> Result<RamseyFit, ExperimentError> {
    if taus.len() != ratios.len() || taus.len() < 8 + 3 * seed_frequencies.len() {
        return Err(ExperimentError::Protocol("too few samples for a fringe fit".into()));
    }
    if seed_frequencies.is_empty() || seed_frequencies.iter().any(|f| !(f.is_finite() && *f > 0.0))
    {
        return Err(ExperimentError::Protocol("fringe seeds must be positive".into()));
    }
    let n_comp = seed_frequencies.len();
    let tail_start = ratios.len() - ratios.len() / 5 - 1;
    let tail = ratios[tail_start..].iter().sum::<f64>() / (ratios.len() - tail_start) as f64;
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max)
        - ratios.iter().cloned().fold(f64::MAX, f64::min);
    let span = taus.last().unwrap() - taus[0];

    let mut seed = vec![tail, ratios[0] - tail, span / 3.0, span / 3.0];
    let mut scales = vec![spread.max(1e-3), spread.max(1e-3), span / 3.0, span / 3.0];
    for &f in seed_frequencies {
        seed.extend_from_slice(&[spread / (2.0 * n_comp as f64), f, 0.0]);
        scales.extend_from_slice(&[spread.max(1e-3), f, 1.0]);
    }

    let taus_v = taus.to_vec();
    let ratios_v = ratios.to_vec();
    let model = move |p: &[f64]| -> DVector<f64> {
        let (c, b, t_drift, t2) = (p[0], p[1], p[2].abs().max(1e-12), p[3].abs().max(1e-12));
        DVector::from_iterator(
            taus_v.len(),
            taus_v.iter().zip(&ratios_v).map(|(&t, &y)| {
                let mut val = c + b * (-t / t_drift).exp();
                let envelope = (-t / t2).exp();
                for i in 0..n_comp {
                    let (a, f, phi) = (p[4 + 3 * i], p[5 + 3 * i], p[6 + 3 * i]);
                    val += a * (TAU * f * t + phi).cos() * envelope;
                }
                val - y
            }),
        )
    };

    let out = levenberg_marquardt(model, &seed, &scales);
    let components = (0..n_comp)
        .map(|i| FringeComponent {
            frequency: out.values[5 + 3 * i].abs(),
            frequency_std_error: out.std_errors[5 + 3 * i],
            amplitude: out.values[4 + 3 * i],
            phase: out.values[6 + 3 * i],
        })
        .collect();
    Ok(RamseyFit {
        baseline: out.values[0],
        drift_amplitude: out.values[1],
        drift_time: out.values[2].abs(),
        t2_star: out.values[3].abs(),
        t2_star_std_error: out.std_errors[3],
        components,
        residual_sum_of_squares: out.rss,
        converged: out.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carrier_placement_matches_the_line_table() {
        let setup = Setup::default_operating_point().unwrap();
        let np = setup.nuclear_preserving_lines();
        let sep = np[1].frequency - np[0].frequency;

        let sym = RamseyCarrier::Symmetric.expected_fringes(&setup);
        assert_eq!(sym.len(), 1, "equidistant carrier gives one beat");
        assert!((sym[0] - sep / 2.0).abs() < 1e-6);

        let asym = RamseyCarrier::Asymmetric.expected_fringes(&setup);
        assert_eq!(asym.len(), 2);
        assert!((asym[0] - sep / 3.0).abs() < 1.0);
        assert!((asym[1] - 2.0 * sep / 3.0).abs() < 1.0);
    }

    #[test]
    fn joint_fit_recovers_a_synthetic_two_tone_signal() {
        let taus: Vec<f64> = (0..160).map(|i| i as f64 * 2.5e-9).collect();
        let truth = |t: f64| {
            0.45 + 0.08 * (-t / 180e-9).exp()
                + (0.10 * (TAU * 36e6 * t + 0.3).cos() + 0.05 * (TAU * 18e6 * t - 0.2).cos())
                    * (-t / 120e-9).exp()
        };
        let ys: Vec<f64> = taus.iter().map(|&t| truth(t)).collect();
        let fit = fit_ramsey_fringes(&taus, &ys, &[18e6, 36e6]).unwrap();
        assert!(fit.converged);
        let mut freqs: Vec<f64> = fit.components.iter().map(|c| c.frequency).collect();
        freqs.sort_by(f64::total_cmp);
        assert!((freqs[0] - 18e6).abs() < 0.05e6, "{freqs:?}");
        assert!((freqs[1] - 36e6).abs() < 0.05e6, "{freqs:?}");
        assert!((fit.t2_star - 120e-9).abs() < 2e-9);
        assert!((fit.drift_time - 180e-9).abs() < 10e-9);
    }

    #[test]
    fn scan_matches_the_sequence_runner() {
        use pulse_sequencer::{sequence_peak_ratio, PulseSequence};
        let setup = Setup::default_operating_point().unwrap();
        let sweep = SweepSpec::new(0.0, 40e-9, 3).unwrap();
        let carrier = RamseyCarrier::Symmetric;
        let f_carrier = carrier.frequency(&setup);
        let result = ramsey_scan(&setup, &sweep, carrier).unwrap();
        let rho0 = setup.shot_start().unwrap();
        let amp = setup.drive_amplitude(setup.strongest_line());
        let t_half = half_pi_duration(setup.config.rabi_effective);
        for (i, &tau) in result.abscissa.values.iter().enumerate() {
            let mut segments = vec![
                PulseSegment::OpticalPump {
                    rate: setup.config.pump_rate,
                    duration: setup.config.pump_duration,
                },
                PulseSegment::MicrowaveDrive {
                    carrier: f_carrier,
                    rabi_amplitude: amp,
                    phase: 0.0,
                    duration: t_half,
                },
            ];
            if tau > 0.0 {
                segments.push(PulseSegment::Wait { duration: tau });
            }
            segments.push(PulseSegment::MicrowaveDrive {
                carrier: f_carrier,
                rabi_amplitude: amp,
                phase: 0.0,
                duration: t_half,
            });
            segments.push(PulseSegment::Wait { duration: POST_RAMSEY_WAIT });
            segments.push(PulseSegment::OpticalPump {
                rate: setup.config.pump_rate,
                duration: setup.config.pump_duration,
            });
            let reference = sequence_peak_ratio(
                &PulseSequence::new(segments).unwrap(),
                &rho0,
                &setup.spectrum,
                &setup.config.params,
                setup.config.temperature,
            )
            .unwrap();
            let got = result.columns[0].values[i];
            assert!((got - reference).abs() < 1e-9, "tau {tau}: {got} vs {reference}");
        }
    }
}
