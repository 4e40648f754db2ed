//! Classical population-rate reference for the pump-wait-pump protocol.
//!
//! The undriven model never couples populations to coherences (diagonal
//! Hamiltonian, one-element jump operators), so an 8-dimensional rate network
//! integrated with plain RK4 must reproduce the full density-matrix pipeline.
//! Everything here is built independently of the Lindblad engine: pump pairs
//! from the state labels, transfer rates from the channel table, equilibrium
//! from an SVD kernel.

use crate::{ExperimentError, Setup};
use nalgebra::{DMatrix, DVector};
use siv_model::{phonon_channels, phonon_rates, Branch, EnergySpectrum, SpinLabel};

/// Lower-branch pump pairs (source spin-up index, target spin-down index with
/// the same nuclear label), derived from the eigenstate labels alone.
pub(crate) fn pump_pairs(spectrum: &EnergySpectrum) -> Result<Vec<(usize, usize)>, ExperimentError> {
    let mut pairs = Vec::new();
    for (k, label) in spectrum.labels.iter().enumerate() {
        if label.branch == Branch::Lower && label.spin == SpinLabel::Up {
            let target = spectrum.labels.iter().position(|t| {
                t.branch == Branch::Lower && t.spin == SpinLabel::Down && t.nuclear == label.nuclear
            });
            match target {
                Some(t) => pairs.push((k, t)),
                None => {
                    return Err(ExperimentError::Protocol(
                        "pump source without a same-nuclear target".into(),
                    ))
                }
            }
        }
    }
    if pairs.len() != 2 {
        return Err(ExperimentError::Protocol(format!(
            "expected two pump sources, found {}",
            pairs.len()
        )));
    }
    Ok(pairs)
}

fn add_rate(r: &mut DMatrix<f64>, from: usize, to: usize, rate: f64) {
    r[(to, from)] += rate;
    r[(from, from)] -= rate;
}

/// Generator of the undriven population network, dp/dt = R p.
fn wait_matrix(setup: &Setup) -> Result<DMatrix<f64>, ExperimentError> {
    let params = &setup.config.params;
    let rates = phonon_rates(params, params.lambda_so, setup.config.temperature)?;
    let channels = phonon_channels(&setup.spectrum, rates)?;
    let mut r = DMatrix::zeros(8, 8);
    for ch in &channels {
        add_rate(&mut r, ch.from, ch.to, ch.rate);
    }
    Ok(r)
}

fn with_pump(mut r: DMatrix<f64>, spectrum: &EnergySpectrum, pump_rate: f64) -> Result<DMatrix<f64>, ExperimentError> {
    for (from, to) in pump_pairs(spectrum)? {
        add_rate(&mut r, from, to, pump_rate);
    }
    Ok(r)
}

/// Fixed point of the network: kernel vector of R, normalized to unit sum.
fn network_equilibrium(r: &DMatrix<f64>) -> Result<DVector<f64>, ExperimentError> {
    let svd = r.clone().svd(true, true);
    let v_t = svd.v_t.as_ref().expect("svd requested");
    let (mut idx, mut smallest) = (0usize, f64::INFINITY);
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s < smallest {
            smallest = *s;
            idx = i;
        }
    }
    let kernel = v_t.row(idx).transpose();
    let total: f64 = kernel.iter().sum();
    if total.abs() < 1e-12 {
        return Err(ExperimentError::Protocol("rate network kernel has zero total weight".into()));
    }
    let p = kernel / total;
    if p.iter().any(|&x| x < -1e-9) {
        return Err(ExperimentError::Protocol("rate network equilibrium not a distribution".into()));
    }
    Ok(p.map(|x| x.max(0.0)))
}

/// Classical RK4 on dp/dt = R p with steps small against the fastest rate.
fn advance(r: &DMatrix<f64>, p: &DVector<f64>, duration: f64) -> DVector<f64> {
    if duration <= 0.0 {
        return p.clone();
    }
    let fastest = (0..8).map(|i| r[(i, i)].abs()).fold(0.0f64, f64::max).max(1.0);
    let steps = ((duration * fastest / 0.02).ceil() as usize).max(1);
    let dt = duration / steps as f64;
    let mut p = p.clone();
    for _ in 0..steps {
        let k1 = r * &p;
        let k2 = r * (&p + &k1 * (dt / 2.0));
        let k3 = r * (&p + &k2 * (dt / 2.0));
        let k4 = r * (&p + &k3 * dt);
        p += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    p
}

/// Peak-ratio curve of the pump-wait-pump protocol predicted by the rate
/// network alone. `taus` must be ascending.
pub fn rate_equation_ratio_curve(setup: &Setup, taus: &[f64]) -> Result<Vec<f64>, ExperimentError> {
    if taus.windows(2).any(|w| w[0] > w[1]) {
        return Err(ExperimentError::InvalidSweep("wait grid must be ascending".into()));
    }
    let sources: Vec<usize> = pump_pairs(&setup.spectrum)?.iter().map(|&(s, _)| s).collect();
    let signal = |p: &DVector<f64>| sources.iter().map(|&k| p[k]).sum::<f64>();

    let r_wait = wait_matrix(setup)?;
    let r_pump = with_pump(r_wait.clone(), &setup.spectrum, setup.config.pump_rate)?;
    let p_eq = network_equilibrium(&r_wait)?;
    let s0 = signal(&p_eq);
    if !(s0 > 0.0) {
        return Err(ExperimentError::Protocol("equilibrium carries no pumpable signal".into()));
    }
    let pumped = advance(&r_pump, &p_eq, setup.config.pump_duration);

    let mut out = Vec::with_capacity(taus.len());
    let mut p = pumped;
    let mut reached = 0.0;
    for &tau in taus {
        p = advance(&r_wait, &p, tau - reached);
        reached = tau;
        out.push(signal(&p) / s0);
    }
    Ok(out)
}

/// Recovery grid matched to the network's own slow scale: ten upward
/// lifetimes, densest where the exponential bends.
pub(crate) fn default_recovery_grid(setup: &Setup) -> Result<Vec<f64>, ExperimentError> {
    let params = &setup.config.params;
    let (gamma_up, _) = phonon_rates(params, params.lambda_so, setup.config.temperature)?;
    if !(gamma_up > 0.0) {
        return Err(ExperimentError::Protocol(
            "upward phonon rate is zero; nothing recovers".into(),
        ));
    }
    let span = 5.0 * 2.0 / gamma_up;
    if !(span < 1.0) {
        return Err(ExperimentError::Protocol(format!(
            "network relaxes too slowly to scan ({span:.3e} s span)"
        )));
    }
    Ok((0..48).map(|i| span * i as f64 / 47.0).collect())
}

/// Spin relaxation time of the configured network: single-exponential time
/// constant fitted to the classical recovery curve.
pub fn rate_equation_spin_t1(setup: &Setup) -> Result<f64, ExperimentError> {
    let taus = default_recovery_grid(setup)?;
    let curve = rate_equation_ratio_curve(setup, &taus)?;
    let fit = fitting::fit_exp_recovery(&taus, &curve)?;
    fit.value("tau")
        .filter(|t| t.is_finite() && *t > 0.0)
        .ok_or_else(|| ExperimentError::Protocol("recovery fit produced no time constant".into()))
}

/// Zero-occupancy rate constant that moves the network's spin relaxation time
/// to `target`. Every rate in the undriven network scales with gamma0, so its
/// time constant scales inversely; only the pump-vs-phonon competition during
/// initialization perturbs the fitted value, at the few-1e-4 level.
pub fn gamma0_for_spin_t1(setup: &Setup, target: f64) -> Result<f64, ExperimentError> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(ExperimentError::Protocol(format!("target time must be positive, got {target}")));
    }
    let current = rate_equation_spin_t1(setup)?;
    Ok(setup.config.params.gamma0_orbital * current / target)
}
