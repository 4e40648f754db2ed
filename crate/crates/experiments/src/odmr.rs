use crate::driver::{apply, pumped_shot, Stage};
use crate::{Column, ExperimentError, Setup, SweepResult, SweepSpec};
use pulse_sequencer::{pi_duration, PulseSegment};
use siv_model::{build_ground_hamiltonian, diagonalize, odmr_transitions, LineKind, MagneticField};

/// Swept-carrier resonance scan: pump, one nominal pi pulse at the carrier,
/// readout pump. Recovered signal peaks where the carrier meets a line.
pub fn odmr_scan(setup: &Setup, sweep: &SweepSpec) -> Result<SweepResult, ExperimentError> {
    odmr_scan_with_duration(setup, sweep, pi_duration(setup.config.rabi_effective))
}

/// Same scan with an explicit microwave pulse length instead of the derived
/// pi time. Lets a zero-amplitude control still use a finite pulse.
pub fn odmr_scan_with_duration(
    setup: &Setup,
    sweep: &SweepSpec,
    t_pi: f64,
) -> Result<SweepResult, ExperimentError> {
    let carriers = sweep.values();
    let amp = setup.drive_amplitude(setup.strongest_line());

    let shot = pumped_shot(setup, 0.0)?;
    let mut ratios = Vec::with_capacity(carriers.len());
    for &carrier in &carriers {
        let seg = PulseSegment::MicrowaveDrive {
            carrier,
            rabi_amplitude: amp,
            phase: 0.0,
            duration: t_pi,
        };
        // Each carrier gets its own frame; the pumped state is diagonal, so
        // reusing it across frames is exact.
        let mw = Stage::new(setup, &seg, carrier)?;
        let driven = apply(&mw.propagator(t_pi)?, &shot.after_pump)?;
        ratios.push(shot.pump.edge(&driven) / shot.start_edge);
    }

    let result = SweepResult {
        experiment: "odmr".into(),
        abscissa: Column::new("carrier_hz", carriers),
        columns: vec![Column::new("peak_ratio", ratios)],
        metadata: setup.metadata(),
    };
    result.validate()?;
    Ok(result)
}

/// Carrier window covering both main lines with margin on each side.
pub fn default_odmr_sweep(setup: &Setup) -> Result<SweepSpec, ExperimentError> {
    let np = setup.nuclear_preserving_lines();
    let margin = 40e6;
    SweepSpec::new(np[0].frequency - margin, np[1].frequency + margin, 201)
}

/// Line positions versus field magnitude at the configured orientation. No
/// pulses are played; each field is diagonalized and classified directly.
pub fn odmr_vs_field(setup: &Setup, sweep: &SweepSpec) -> Result<SweepResult, ExperimentError> {
    let fields = sweep.values();
    if fields[0] <= 0.0 {
        return Err(ExperimentError::InvalidSweep(
            "field sweep must stay positive; spin labels degenerate at zero field".into(),
        ));
    }
    let mut np_low = Vec::with_capacity(fields.len());
    let mut np_high = Vec::with_capacity(fields.len());
    let mut bf_low = Vec::with_capacity(fields.len());
    let mut bf_high = Vec::with_capacity(fields.len());
    let mut strength_low = Vec::with_capacity(fields.len());
    let mut strength_high = Vec::with_capacity(fields.len());

    for &b in &fields {
        let field = MagneticField::new(
            b,
            setup.config.field_polar_deg.to_radians(),
            setup.config.field_azimuth_deg.to_radians(),
        );
        let h = build_ground_hamiltonian(&setup.config.params, &field)?;
        let spectrum = diagonalize(&h, &setup.config.params)?;
        let lines = odmr_transitions(&spectrum)?;
        let np: Vec<_> = lines.iter().filter(|l| l.kind == LineKind::NuclearPreserving).collect();
        let bf: Vec<_> = lines.iter().filter(|l| l.kind == LineKind::BothFlipped).collect();
        if np.len() != 2 || bf.len() != 2 {
            return Err(ExperimentError::Protocol(format!(
                "line classification failed at {b} T"
            )));
        }
        np_low.push(np[0].frequency);
        np_high.push(np[1].frequency);
        bf_low.push(bf[0].frequency);
        bf_high.push(bf[1].frequency);
        strength_low.push(np[0].strength);
        strength_high.push(np[1].strength);
    }

    let result = SweepResult {
        experiment: "odmr-vs-field".into(),
        abscissa: Column::new("field_t", fields),
        columns: vec![
            Column::new("np_low_hz", np_low),
            Column::new("np_high_hz", np_high),
            Column::new("bf_low_hz", bf_low),
            Column::new("bf_high_hz", bf_high),
            Column::new("np_low_strength", strength_low),
            Column::new("np_high_strength", strength_high),
        ],
        metadata: setup.metadata(),
    };
    result.validate()?;
    Ok(result)
}
