use crate::driver::{apply, pumped_shot, Stage};
use crate::rate_eq::default_recovery_grid;
use crate::{Column, ExperimentError, Setup, SweepResult, SweepSpec};
use pulse_sequencer::PulseSegment;

/// Pump-wait-pump recovery: the ratio of the readout pump's leading-edge
/// fluorescence to the initialization pump's, versus the wait between them.
pub fn t1_recovery_scan(setup: &Setup, sweep: &SweepSpec) -> Result<SweepResult, ExperimentError> {
    let taus = sweep.values();
    let ratios = recovery_ratios(setup, &taus)?;
    let result = SweepResult {
        experiment: "t1".into(),
        abscissa: Column::new("wait_s", taus),
        columns: vec![Column::new("peak_ratio", ratios)],
        metadata: setup.metadata(),
    };
    result.validate()?;
    Ok(result)
}

/// Wait grid matched to the configured rates, for callers without an opinion.
pub fn default_t1_sweep(setup: &Setup) -> Result<SweepSpec, ExperimentError> {
    let grid = default_recovery_grid(setup)?;
    SweepSpec::new(0.0, *grid.last().unwrap(), grid.len())
}

pub(crate) fn recovery_ratios(setup: &Setup, taus: &[f64]) -> Result<Vec<f64>, ExperimentError> {
    let shot = pumped_shot(setup, 0.0)?;
    let wait = Stage::new(setup, &PulseSegment::Wait { duration: 0.0 }, 0.0)?;
    let mut ratios = Vec::with_capacity(taus.len());
    for &tau in taus {
        let relaxed = if tau > 0.0 {
            apply(&wait.propagator(tau)?, &shot.after_pump)?
        } else {
            shot.after_pump.clone()
        };
        ratios.push(shot.pump.edge(&relaxed) / shot.start_edge);
    }
    Ok(ratios)
}
