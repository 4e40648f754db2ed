use crate::driver::{apply, pumped_shot, Stage};
use crate::{Column, ExperimentError, Setup, SweepResult, SweepSpec};
use pulse_sequencer::PulseSegment;

/// Driven-evolution scan: pump, drive the strongest line for a variable time
/// inside a fixed initialization-to-readout window, readout pump. The window
/// stretches only when the pulse outgrows it.
pub fn rabi_duration_scan(
    setup: &Setup,
    sweep: &SweepSpec,
    detuning: f64,
) -> Result<SweepResult, ExperimentError> {
    let durations = sweep.values();
    let amp = setup.drive_amplitude(setup.strongest_line());
    let ratios = driven_ratios(setup, &durations, amp, detuning)?;
    let result = SweepResult {
        experiment: "rabi".into(),
        abscissa: Column::new("pulse_s", durations),
        columns: vec![Column::new("peak_ratio", ratios)],
        metadata: setup.metadata(),
    };
    result.validate()?;
    Ok(result)
}

/// Pulse grid resolving the configured effective Rabi frequency inside the
/// readout window.
pub fn default_rabi_sweep(setup: &Setup) -> Result<SweepSpec, ExperimentError> {
    SweepSpec::new(0.0, setup.config.readout_gap, 85)
}

/// Effective oscillation frequency versus drive detuning. Each grid point
/// runs its own duration scan and extracts the frequency from a damped-cosine
/// fit; expect the hyperbola sqrt(f_eff^2 + detuning^2).
pub fn rabi_detuning_scan(
    setup: &Setup,
    sweep: &SweepSpec,
) -> Result<SweepResult, ExperimentError> {
    let detunings = sweep.values();
    let amp = setup.drive_amplitude(setup.strongest_line());
    let mut fitted = Vec::with_capacity(detunings.len());
    for &delta in &detunings {
        let f_est = (setup.config.rabi_effective.powi(2) + delta * delta).sqrt();
        fitted.push(fitted_oscillation(setup, amp, delta, f_est)?);
    }
    let result = SweepResult {
        experiment: "rabi-detuning".into(),
        abscissa: Column::new("detuning_hz", detunings),
        columns: vec![Column::new("fitted_rabi_hz", fitted)],
        metadata: setup.metadata(),
    };
    result.validate()?;
    Ok(result)
}

/// Fitted oscillation frequency versus relative drive power. Amplitude scales
/// with sqrt(power), so the fit against the square-root column is a line
/// through the origin.
pub fn rabi_power_scan(setup: &Setup, sweep: &SweepSpec) -> Result<SweepResult, ExperimentError> {
    let powers = sweep.values();
    if powers[0] <= 0.0 {
        return Err(ExperimentError::InvalidSweep("relative power must stay positive".into()));
    }
    let base_amp = setup.drive_amplitude(setup.strongest_line());
    let mut roots = Vec::with_capacity(powers.len());
    let mut fitted = Vec::with_capacity(powers.len());
    for &p in &powers {
        let scale = p.sqrt();
        roots.push(scale);
        fitted.push(fitted_oscillation(
            setup,
            base_amp * scale,
            0.0,
            setup.config.rabi_effective * scale,
        )?);
    }
    let result = SweepResult {
        experiment: "rabi-power".into(),
        abscissa: Column::new("power_rel", powers),
        columns: vec![Column::new("sqrt_power", roots), Column::new("fitted_rabi_hz", fitted)],
        metadata: setup.metadata(),
    };
    result.validate()?;
    Ok(result)
}

pub(crate) fn driven_ratios(
    setup: &Setup,
    durations: &[f64],
    amp: f64,
    detuning: f64,
) -> Result<Vec<f64>, ExperimentError> {
    let carrier = setup.strongest_line().frequency + detuning;
    let shot = pumped_shot(setup, carrier)?;
    let mw_template = PulseSegment::MicrowaveDrive {
        carrier,
        rabi_amplitude: amp,
        phase: 0.0,
        duration: 1e-9,
    };
    let mw = Stage::new(setup, &mw_template, carrier)?;
    let gap_stage = Stage::new(setup, &PulseSegment::Wait { duration: 0.0 }, carrier)?;

    let mut ratios = Vec::with_capacity(durations.len());
    for &t in durations {
        let mut rho = if t > 0.0 {
            apply(&mw.propagator(t)?, &shot.after_pump)?
        } else {
            shot.after_pump.clone()
        };
        let rest = (setup.config.readout_gap - t).max(0.0);
        if rest > 0.0 {
            rho = apply(&gap_stage.propagator(rest)?, &rho)?;
        }
        ratios.push(shot.pump.edge(&rho) / shot.start_edge);
    }
    Ok(ratios)
}

/// One duration scan plus a damped-cosine fit, grid scaled to the expected
/// frequency so every oscillation is sampled about a dozen times.
fn fitted_oscillation(
    setup: &Setup,
    amp: f64,
    detuning: f64,
    f_est: f64,
) -> Result<f64, ExperimentError> {
    if !(f_est > 0.0) {
        return Err(ExperimentError::Protocol("expected frequency must be positive".into()));
    }
    let n = 96usize;
    let step = 1.0 / (12.0 * f_est);
    let durations: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
    let ratios = driven_ratios(setup, &durations, amp, detuning)?;
    let fit = fitting::fit_damped_cosine(&durations, &ratios)?;
    fit.value("freq")
        .map(f64::abs)
        .filter(|f| f.is_finite() && *f > 0.0)
        .ok_or_else(|| ExperimentError::Protocol("oscillation fit returned no frequency".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet_setup() -> Setup {
        Setup::default_operating_point().unwrap().without_phonons()
    }

    #[test]
    fn scan_matches_the_sequence_runner() {
        use pulse_sequencer::{sequence_peak_ratio, PulseSequence};
        let setup = Setup::default_operating_point().unwrap();
        let sweep = SweepSpec::new(0.0, 60e-9, 3).unwrap();
        let result = rabi_duration_scan(&setup, &sweep, 0.0).unwrap();
        let rho0 = setup.shot_start().unwrap();
        let amp = setup.drive_amplitude(setup.strongest_line());
        let carrier = setup.strongest_line().frequency;
        for (i, &t) in result.abscissa.values.iter().enumerate() {
            let mut segments = vec![PulseSegment::OpticalPump {
                rate: setup.config.pump_rate,
                duration: setup.config.pump_duration,
            }];
            if t > 0.0 {
                segments.push(PulseSegment::MicrowaveDrive {
                    carrier,
                    rabi_amplitude: amp,
                    phase: 0.0,
                    duration: t,
                });
            }
            let rest = (setup.config.readout_gap - t).max(0.0);
            if rest > 0.0 {
                segments.push(PulseSegment::Wait { duration: rest });
            }
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
            assert!((got - reference).abs() < 1e-9, "t {t}: {got} vs {reference}");
        }
    }

    #[test]
    fn resonant_fit_recovers_the_calibrated_frequency() {
        let setup = quiet_setup();
        let amp = setup.drive_amplitude(setup.strongest_line());
        let f = fitted_oscillation(&setup, amp, 0.0, 15e6).unwrap();
        assert!((f - 15e6).abs() / 15e6 < 0.01, "fitted {f}");
    }

    #[test]
    fn power_scan_rejects_nonpositive_power() {
        let setup = quiet_setup();
        assert!(rabi_power_scan(&setup, &SweepSpec::new(0.0, 4.0, 3).unwrap()).is_err());
    }
}
