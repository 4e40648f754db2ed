use crate::rate_eq::default_recovery_grid;
use crate::t1::recovery_ratios;
use crate::{
    fit_ramsey_fringes, ramsey_scan, Column, ExperimentError, RamseyCarrier, Setup, SweepResult,
    SweepSpec,
};
use siv_model::phonon_rates;

/// Decoherence-rate triple versus temperature. Per grid point the orbital
/// rate is the configured downward phonon rate, while the spin relaxation and
/// inter-pulse coherence rates come from rerunning the recovery and
/// free-evolution scans at that temperature and fitting them.
pub fn temperature_sweep(setup: &Setup, sweep: &SweepSpec) -> Result<SweepResult, ExperimentError> {
    let temperatures = sweep.values();
    if temperatures[0] <= 0.0 {
        return Err(ExperimentError::InvalidSweep("temperatures must be positive".into()));
    }
    let mut inv_t2star = Vec::with_capacity(temperatures.len());
    let mut inv_2t1orb = Vec::with_capacity(temperatures.len());
    let mut inv_2t1spin = Vec::with_capacity(temperatures.len());

    for &t in &temperatures {
        let local = setup.with_temperature(t);
        let params = &local.config.params;
        let (gamma_up, gamma_down) = phonon_rates(params, params.lambda_so, t)?;
        inv_2t1orb.push(gamma_down / 2.0);

        let taus = default_recovery_grid(&local)?;
        let ratios = recovery_ratios(&local, &taus)?;
        let t1 = fitting::fit_exp_recovery(&taus, &ratios)?
            .value("tau")
            .filter(|v| v.is_finite() && *v > 0.0)
            .ok_or_else(|| {
                ExperimentError::Protocol(format!("no recovery time constant at {t} K"))
            })?;
        inv_2t1spin.push(1.0 / (2.0 * t1));

        inv_t2star.push(1.0 / fitted_t2_star(&local, gamma_up)?);
    }

    let result = SweepResult {
        experiment: "tempsweep".into(),
        abscissa: Column::new("temperature_K", temperatures),
        columns: vec![
            Column::new("inv_T2star_per_s", inv_t2star),
            Column::new("inv_2T1orb_per_s", inv_2t1orb),
            Column::new("inv_2T1spin_per_s", inv_2t1spin),
        ],
        metadata: setup.metadata(),
    };
    result.validate()?;
    Ok(result)
}

/// Symmetric-carrier free-evolution scan scaled to the expected coherence
/// time, then the joint fringe fit.
fn fitted_t2_star(setup: &Setup, gamma_up: f64) -> Result<f64, ExperimentError> {
    if !(gamma_up > 0.0) {
        return Err(ExperimentError::Protocol("coherence never decays at zero upward rate".into()));
    }
    // The fringe coherence leaks at roughly the upward rate, so a few of those
    // lifetimes bound the useful window; keep at least three beat periods.
    let seed = RamseyCarrier::Symmetric.expected_fringes(setup);
    let window = (3.5 / gamma_up).max(4.0 / seed[0]).min(1.5e-6);
    let count = ((window * 12.0 * seed[0]).round() as usize).clamp(48, 161);
    let sweep = SweepSpec::new(0.0, window, count)?;
    let scan = ramsey_scan(setup, &sweep, RamseyCarrier::Symmetric)?;
    let fit = fit_ramsey_fringes(
        &scan.abscissa.values,
        scan.column("peak_ratio").expect("scan emits ratios"),
        &seed,
    )?;
    if !fit.converged || !fit.t2_star.is_finite() || fit.t2_star <= 0.0 {
        return Err(ExperimentError::Protocol(format!(
            "fringe fit failed at {} K",
            setup.config.temperature
        )));
    }
    Ok(fit.t2_star)
}
