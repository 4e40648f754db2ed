use crate::lm::{levenberg_marquardt, LmOutcome};
use crate::seed::{seed_frequency, seed_local_maxima, seed_two_frequencies, FrequencySeed};
use crate::{FitError, FitResult};
use nalgebra::DVector;
use std::f64::consts::TAU;

pub fn exp_recovery_model(amp: f64, tau: f64, offset: f64, t: f64) -> f64 {
    offset - amp * (-t / tau).exp()
}

pub fn lorentzian_model(baseline: f64, peaks: &[(f64, f64, f64)], f: f64) -> f64 {
    baseline
        + peaks
            .iter()
            .map(|&(center, fwhm, amp)| amp / (1.0 + ((f - center) / (fwhm / 2.0)).powi(2)))
            .sum::<f64>()
}

pub fn damped_cosine_model(amp: f64, freq: f64, phase: f64, tau: f64, offset: f64, t: f64) -> f64 {
    offset + amp * (TAU * freq * t + phase).cos() * (-t / tau).exp()
}

pub fn generalized_rabi_model(rabi_freq: f64, delta: f64) -> f64 {
    (rabi_freq * rabi_freq + delta * delta).sqrt()
}

/// Recovery toward an asymptote: y = c - a*exp(-t/tau).
pub fn fit_exp_recovery(t: &[f64], y: &[f64]) -> Result<FitResult, FitError> {
    let (t, y) = sorted_pairs(t, y, 4)?;
    if t[0] < 0.0 {
        return Err(FitError::InvalidInput("negative time values".into()));
    }
    let span = positive_span(&t)?;
    let range = spread(&y);
    let tail = y[y.len() - y.len() / 4 - 1..].iter().sum::<f64>() / (y.len() / 4 + 1) as f64;
    let seed = [tail - y[0], span / 3.0, tail];
    let scales = [
        pick_scale(&[seed[0].abs(), range / 2.0], fallback_scale(&y)),
        span / 3.0,
        pick_scale(&[tail.abs(), range / 2.0], fallback_scale(&y)),
    ];
    let out = levenberg_marquardt(
        |p| {
            DVector::from_iterator(
                t.len(),
                t.iter()
                    .zip(&y)
                    .map(|(&ti, &yi)| exp_recovery_model(p[0], p[1], p[2], ti) - yi),
            )
        },
        &seed,
        &scales,
    );
    Ok(assemble(vec!["amp", "tau", "offset"], out, Vec::new()))
}

/// Sum of one or two Lorentzian peaks on a constant baseline.
pub fn fit_lorentzian_peaks(f: &[f64], y: &[f64], n_peaks: usize) -> Result<FitResult, FitError> {
    if !(1..=2).contains(&n_peaks) {
        return Err(FitError::InvalidInput(format!("n_peaks must be 1 or 2, got {n_peaks}")));
    }
    let (f, y) = sorted_pairs(f, y, 3 * n_peaks + 2)?;
    let span = positive_span(&f)?;
    let range = spread(&y);
    let baseline0 = y.iter().cloned().fold(f64::INFINITY, f64::min);

    let mut warnings = Vec::new();
    let peak_seeds: Vec<(f64, f64, f64)> = match seed_local_maxima(&y, n_peaks) {
        Ok(idx) => idx.iter().map(|&k| (f[k], span / 20.0, y[k] - baseline0)).collect(),
        Err(e) => {
            if range > 1e-12 * fallback_scale(&y) {
                return Err(e);
            }
            // Flat data: nothing to seed from; place zero-amplitude peaks
            // across the window and let the optimizer flag them.
            warnings.push("no peaks found in flat data".to_string());
            (1..=n_peaks)
                .map(|k| {
                    (f[0] + span * k as f64 / (n_peaks + 1) as f64, span / 20.0, 0.0)
                })
                .collect()
        }
    };

    let mut seed = vec![baseline0];
    let mut scales = vec![pick_scale(&[baseline0.abs(), range / 2.0], fallback_scale(&y))];
    for &(c0, w0, a0) in &peak_seeds {
        seed.extend_from_slice(&[c0, w0, a0]);
        scales.extend_from_slice(&[
            span,
            w0,
            pick_scale(&[a0.abs(), range / 2.0], fallback_scale(&y)),
        ]);
    }
    let out = levenberg_marquardt(
        |p| {
            let peaks: Vec<(f64, f64, f64)> =
                p[1..].chunks_exact(3).map(|c| (c[0], c[1], c[2])).collect();
            DVector::from_iterator(
                f.len(),
                f.iter().zip(&y).map(|(&fi, &yi)| lorentzian_model(p[0], &peaks, fi) - yi),
            )
        },
        &seed,
        &scales,
    );
    let names = if n_peaks == 1 {
        vec!["baseline", "center_1", "fwhm_1", "amp_1"]
    } else {
        vec!["baseline", "center_1", "fwhm_1", "amp_1", "center_2", "fwhm_2", "amp_2"]
    };
    let mut result = assemble(names, out, warnings);
    // Report widths as positive; the shape only depends on |fwhm|.
    for (name, v) in result.names.iter().zip(result.values.iter_mut()) {
        if name.starts_with("fwhm") {
            *v = v.abs();
        }
    }
    Ok(result)
}

/// Damped oscillation: y = c + A*cos(2*pi*f*t + phi)*exp(-t/tau).
pub fn fit_damped_cosine(t: &[f64], y: &[f64]) -> Result<FitResult, FitError> {
    let (t, y) = sorted_pairs(t, y, 8)?;
    let span = positive_span(&t)?;
    let range = spread(&y);
    let offset0 = y.iter().sum::<f64>() / y.len() as f64;
    let mut warnings = Vec::new();

    match seed_frequency(&t, &y)? {
        FrequencySeed::Oscillation(f0) => {
            if f0 * span < 2.0 {
                warnings.push(format!(
                    "only {:.2} oscillation periods sampled; frequency estimate unreliable",
                    f0 * span
                ));
            }
            let phase0 = quadrature_phase(&t, &y, offset0, f0);
            let seed = [range / 2.0, f0, phase0, span / 2.0, offset0];
            let scales = [
                pick_scale(&[range / 2.0], fallback_scale(&y)),
                f0,
                1.0,
                span / 2.0,
                pick_scale(&[offset0.abs(), range / 2.0], fallback_scale(&y)),
            ];
            let out = levenberg_marquardt(
                |p| {
                    DVector::from_iterator(
                        t.len(),
                        t.iter().zip(&y).map(|(&ti, &yi)| {
                            damped_cosine_model(p[0], p[1], p[2], p[3], p[4], ti) - yi
                        }),
                    )
                },
                &seed,
                &scales,
            );
            let mut result = assemble(vec!["amp", "freq", "phase", "tau", "offset"], out, warnings);
            normalize_cosine_sign(&mut result, 0, 2);
            result.values[1] = result.values[1].abs();
            Ok(result)
        }
        FrequencySeed::Trend => {
            // Pure envelope: frequency and phase are held at zero, the rest
            // reduces to an exponential toward the offset.
            warnings.push(
                "no dominant oscillation; fitted a pure decay with frequency fixed at zero"
                    .to_string(),
            );
            let seed = [y[0] - offset0, span / 2.0, offset0];
            let scales = [
                pick_scale(&[seed[0].abs(), range / 2.0], fallback_scale(&y)),
                span / 2.0,
                pick_scale(&[offset0.abs(), range / 2.0], fallback_scale(&y)),
            ];
            let out = levenberg_marquardt(
                |p| {
                    DVector::from_iterator(
                        t.len(),
                        t.iter().zip(&y).map(|(&ti, &yi)| {
                            damped_cosine_model(p[0], 0.0, 0.0, p[1], p[2], ti) - yi
                        }),
                    )
                },
                &seed,
                &scales,
            );
            let inner = assemble(vec!["amp", "tau", "offset"], out, warnings);
            Ok(splice_fixed(
                vec!["amp", "freq", "phase", "tau", "offset"],
                &inner,
                &[("freq", 0.0), ("phase", 0.0)],
            ))
        }
    }
}

/// Two damped cosines sharing one decay constant:
/// y = c + exp(-t/tau) * (A1*cos(2*pi*f1*t + phi1) + A2*cos(2*pi*f2*t + phi2)).
pub fn fit_double_damped_cosine(t: &[f64], y: &[f64]) -> Result<FitResult, FitError> {
    let (t, y) = sorted_pairs(t, y, 12)?;
    let span = positive_span(&t)?;
    let range = spread(&y);
    let offset0 = y.iter().sum::<f64>() / y.len() as f64;

    let freqs = seed_two_frequencies(&t, &y)?;
    if freqs.len() < 2 {
        let mut single = fit_damped_cosine(&t, &y)?;
        single
            .warnings
            .push("second frequency component not resolvable; single-component fit".to_string());
        return Ok(splice_fixed(
            vec!["amp_1", "freq_1", "phase_1", "amp_2", "freq_2", "phase_2", "tau", "offset"],
            &FitResult {
                names: vec!["amp_1", "freq_1", "phase_1", "tau", "offset"],
                ..single
            },
            &[("amp_2", 0.0), ("freq_2", 0.0), ("phase_2", 0.0)],
        ));
    }

    let (f1, f2) = (freqs[0], freqs[1]);
    let seed = [
        range / 4.0,
        f1,
        quadrature_phase(&t, &y, offset0, f1),
        range / 4.0,
        f2,
        quadrature_phase(&t, &y, offset0, f2),
        span / 2.0,
        offset0,
    ];
    let amp_scale = pick_scale(&[range / 4.0], fallback_scale(&y));
    let scales = [
        amp_scale,
        f1,
        1.0,
        amp_scale,
        f2,
        1.0,
        span / 2.0,
        pick_scale(&[offset0.abs(), range / 4.0], fallback_scale(&y)),
    ];
    let out = levenberg_marquardt(
        |p| {
            DVector::from_iterator(
                t.len(),
                t.iter().zip(&y).map(|(&ti, &yi)| {
                    let env = (-ti / p[6]).exp();
                    p[7] + env
                        * (p[0] * (TAU * p[1] * ti + p[2]).cos()
                            + p[3] * (TAU * p[4] * ti + p[5]).cos())
                        - yi
                }),
            )
        },
        &seed,
        &scales,
    );
    let mut result = assemble(
        vec!["amp_1", "freq_1", "phase_1", "amp_2", "freq_2", "phase_2", "tau", "offset"],
        out,
        Vec::new(),
    );
    normalize_cosine_sign(&mut result, 0, 2);
    normalize_cosine_sign(&mut result, 3, 5);
    result.values[1] = result.values[1].abs();
    result.values[4] = result.values[4].abs();
    Ok(result)
}

/// Effective precession frequency versus detuning: f = sqrt(rabi^2 + delta^2).
pub fn fit_generalized_rabi(delta: &[f64], f_eff: &[f64]) -> Result<FitResult, FitError> {
    let (delta, f_eff) = sorted_pairs(delta, f_eff, 3)?;
    let omega_sq = delta
        .iter()
        .zip(&f_eff)
        .map(|(&d, &f)| (f * f - d * d).max(0.0))
        .sum::<f64>()
        / delta.len() as f64;
    let f_max = f_eff.iter().cloned().fold(0.0_f64, f64::max);
    let seed = [omega_sq.sqrt().max(0.01 * f_max)];
    let scales = [pick_scale(&[seed[0]], f_max.max(1.0))];
    let out = levenberg_marquardt(
        |p| {
            DVector::from_iterator(
                delta.len(),
                delta
                    .iter()
                    .zip(&f_eff)
                    .map(|(&d, &f)| generalized_rabi_model(p[0], d) - f),
            )
        },
        &seed,
        &scales,
    );
    let mut result = assemble(vec!["rabi_freq"], out, Vec::new());
    result.values[0] = result.values[0].abs();
    let omega = result.values[0];
    if !delta.iter().any(|d| d.abs() < omega / 2.0) {
        result
            .warnings
            .push("no samples below half the bare frequency; fit is ill-conditioned".to_string());
    }
    Ok(result)
}

/// Ordinary least squares line with R^2. Closed form, no iteration.
pub fn fit_linear(x: &[f64], y: &[f64]) -> Result<FitResult, FitError> {
    let (x, y) = sorted_pairs(x, y, 2)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|&v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::RankDeficient("all abscissa values identical".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(&xi, &yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(&y).map(|(&xi, &yi)| (yi - slope * xi - intercept).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|&yi| (yi - my).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - rss / ss_tot };
    let sigma2 = rss / (x.len().saturating_sub(2)).max(1) as f64;
    let se_slope = (sigma2 / sxx).sqrt();
    let se_intercept = (sigma2 * (1.0 / n + mx * mx / sxx)).sqrt();
    Ok(FitResult {
        names: vec!["slope", "intercept", "r_squared"],
        values: vec![slope, intercept, r_squared],
        std_errors: vec![se_slope, se_intercept, 0.0],
        residual_sum_of_squares: rss,
        converged: true,
        iterations: 0,
        warnings: Vec::new(),
    })
}

/// Validates lengths, requires a minimum count, and sorts by abscissa so the
/// result does not depend on input ordering.
fn sorted_pairs(x: &[f64], y: &[f64], needed: usize) -> Result<(Vec<f64>, Vec<f64>), FitError> {
    if x.len() != y.len() {
        return Err(FitError::LengthMismatch { x: x.len(), y: y.len() });
    }
    if x.len() < needed {
        return Err(FitError::NotEnoughData { needed, got: x.len() });
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(FitError::InvalidInput("non-finite sample".into()));
    }
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(y[a].total_cmp(&y[b])));
    Ok((idx.iter().map(|&k| x[k]).collect(), idx.iter().map(|&k| y[k]).collect()))
}

fn positive_span(x: &[f64]) -> Result<f64, FitError> {
    let span = x[x.len() - 1] - x[0];
    if span <= 0.0 {
        return Err(FitError::InvalidInput("abscissa has zero span".into()));
    }
    Ok(span)
}

fn spread(y: &[f64]) -> f64 {
    let max = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = y.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

/// First positive candidate, or the fallback. Keeps optimizer scales strictly
/// positive even for degenerate (constant) data.
fn pick_scale(candidates: &[f64], fallback: f64) -> f64 {
    candidates.iter().cloned().find(|&c| c > 0.0).unwrap_or(fallback)
}

fn fallback_scale(y: &[f64]) -> f64 {
    let m = y.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

/// Least-squares phase of a cosine at a known frequency.
fn quadrature_phase(t: &[f64], y: &[f64], offset: f64, freq: f64) -> f64 {
    let mut cos_proj = 0.0;
    let mut sin_proj = 0.0;
    for (&ti, &yi) in t.iter().zip(y) {
        cos_proj += (yi - offset) * (TAU * freq * ti).cos();
        sin_proj += (yi - offset) * (TAU * freq * ti).sin();
    }
    (-sin_proj).atan2(cos_proj)
}

/// Folds a negative amplitude into the phase and wraps the phase to (-pi, pi].
fn normalize_cosine_sign(result: &mut FitResult, amp_idx: usize, phase_idx: usize) {
    if result.values[amp_idx] < 0.0 {
        result.values[amp_idx] = -result.values[amp_idx];
        result.values[phase_idx] += std::f64::consts::PI;
    }
    let mut phase = result.values[phase_idx].rem_euclid(TAU);
    if phase > std::f64::consts::PI {
        phase -= TAU;
    }
    result.values[phase_idx] = phase;
}

fn assemble(names: Vec<&'static str>, out: LmOutcome, mut warnings: Vec<String>) -> FitResult {
    let mut converged = out.converged;
    if !out.unidentifiable.is_empty() {
        let dead: Vec<&str> = out.unidentifiable.iter().map(|&i| names[i]).collect();
        warnings.push(format!("parameters not constrained by the data: {}", dead.join(", ")));
        converged = false;
    }
    if !out.converged {
        warnings.push(format!("no convergence within {} iterations", out.iterations));
    }
    FitResult {
        names,
        values: out.values,
        std_errors: out.std_errors,
        residual_sum_of_squares: out.rss,
        converged,
        iterations: out.iterations,
        warnings,
    }
}

/// Expands a reduced fit into the full parameter list, inserting the fixed
/// values with zero standard error.
fn splice_fixed(
    full_names: Vec<&'static str>,
    reduced: &FitResult,
    fixed: &[(&'static str, f64)],
) -> FitResult {
    let mut values = Vec::with_capacity(full_names.len());
    let mut errors = Vec::with_capacity(full_names.len());
    for name in &full_names {
        if let Some(&(_, v)) = fixed.iter().find(|(n, _)| n == name) {
            values.push(v);
            errors.push(0.0);
        } else {
            values.push(reduced.value(name).expect("reduced fit carries this parameter"));
            errors.push(reduced.std_error(name).expect("reduced fit carries this parameter"));
        }
    }
    FitResult {
        names: full_names,
        values,
        std_errors: errors,
        residual_sum_of_squares: reduced.residual_sum_of_squares,
        converged: reduced.converged,
        iterations: reduced.iterations,
        warnings: reduced.warnings.clone(),
    }
}
