use crate::jacobian::{numerical_jacobian, JACOBIAN_REL_STEP};
use nalgebra::DVector;

pub const MAX_ITERATIONS: usize = 500;
const REL_PARAM_TOL: f64 = 1e-10;
const REL_RESIDUAL_TOL: f64 = 1e-12;
/// Singular values below this fraction of the largest one mark directions the
/// data does not constrain.
const RANK_TOL: f64 = 1e-10;

pub struct LmOutcome {
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub rss: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Indices of parameters with a component along an unconstrained
    /// direction of the curvature at the optimum.
    pub unidentifiable: Vec<usize>,
}

/// Damped least squares on a numerically differentiated residual vector.
///
/// Internally the parameters are rescaled by their characteristic magnitudes
/// (`scales`), so the identity damping term and the convergence thresholds
/// act uniformly even when the raw parameters span many orders of magnitude.
pub fn levenberg_marquardt<F>(residuals: F, seed: &[f64], scales: &[f64]) -> LmOutcome
where
    F: Fn(&[f64]) -> DVector<f64>,
{
    assert_eq!(seed.len(), scales.len());
    assert!(scales.iter().all(|s| s.is_finite() && *s > 0.0), "scales must be positive");

    let m = seed.len();
    let mut params = seed.to_vec();
    let mut res = residuals(&params);
    let mut rss = res.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let jac = numerical_jacobian(&residuals, &params, scales, JACOBIAN_REL_STEP);
        // Scaled coordinates u = p / s: J_u = J_p * diag(s).
        let mut jac_u = jac;
        for j in 0..m {
            let mut col = jac_u.column_mut(j);
            col *= scales[j];
        }
        let jtj = jac_u.transpose() * &jac_u;
        let jtr = jac_u.transpose() * &res;
        // Marquardt scaling: damp each direction against its own curvature,
        // which makes lambda dimensionless. The floor keeps the solve
        // positive definite when a column of the Jacobian vanishes (the
        // gradient along such a direction is zero, so it never moves).
        let diag_mean =
            (0..m).map(|j| jtj[(j, j)]).sum::<f64>() / m as f64;
        let damping_ref: Vec<f64> = (0..m)
            .map(|j| jtj[(j, j)].max(diag_mean * 1e-12).max(f64::MIN_POSITIVE))
            .collect();

        let mut accepted = false;
        while lambda < 1e15 {
            let mut damped = jtj.clone();
            for j in 0..m {
                damped[(j, j)] += lambda * damping_ref[j];
            }
            let step_u = match damped.cholesky() {
                Some(ch) => ch.solve(&jtr),
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let trial: Vec<f64> =
                (0..m).map(|j| params[j] - step_u[j] * scales[j]).collect();
            let trial_res = residuals(&trial);
            let trial_rss = trial_res.norm_squared();
            let u_norm =
                (0..m).map(|j| (params[j] / scales[j]).powi(2)).sum::<f64>().sqrt();
            let rel_step = step_u.norm() / u_norm.max(1.0);
            if trial_rss.is_finite() && trial_rss <= rss {
                let rel_drop = (rss - trial_rss) / rss.max(f64::MIN_POSITIVE);
                params = trial;
                res = trial_res;
                rss = trial_rss;
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                if rel_step < REL_PARAM_TOL || rel_drop < REL_RESIDUAL_TOL || rss == 0.0 {
                    converged = true;
                }
                break;
            }
            // The damping has shrunk the proposed step below parameter
            // resolution and it still does not descend: local minimum.
            if rel_step < REL_PARAM_TOL {
                converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if converged || !accepted {
            break;
        }
    }

    let (std_errors, unidentifiable) = curvature_errors(&residuals, &params, scales, rss);
    LmOutcome { values: params, std_errors, rss, converged, iterations, unidentifiable }
}

/// Asymptotic standard errors from the pseudo-inverse of J'J at the optimum,
/// scaled by the residual variance. Directions with singular values below
/// RANK_TOL of the largest are reported as unidentifiable and give infinite
/// errors on every parameter they touch.
fn curvature_errors<F>(
    residuals: &F,
    params: &[f64],
    scales: &[f64],
    rss: f64,
) -> (Vec<f64>, Vec<usize>)
where
    F: Fn(&[f64]) -> DVector<f64>,
{
    let m = params.len();
    let n = residuals(params).len();
    let mut jac_u = numerical_jacobian(residuals, params, scales, JACOBIAN_REL_STEP);
    for j in 0..m {
        let mut col = jac_u.column_mut(j);
        col *= scales[j];
    }
    let svd = jac_u.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("svd with v_t requested");
    let sv = &svd.singular_values;
    let sv_max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let sigma2 = rss / (n.saturating_sub(m)).max(1) as f64;

    let mut errors = vec![0.0_f64; m];
    let mut unidentifiable = Vec::new();
    for i in 0..m {
        let mut var_u = 0.0;
        let mut dead = false;
        for k in 0..sv.len() {
            let vik = v_t[(k, i)];
            if sv[k] > RANK_TOL * sv_max && sv_max > 0.0 {
                var_u += (vik / sv[k]).powi(2);
            } else if vik.abs() > 1e-6 {
                dead = true;
            }
        }
        if dead {
            errors[i] = f64::INFINITY;
            unidentifiable.push(i);
        } else {
            errors[i] = (sigma2 * var_u).sqrt() * scales[i];
        }
    }
    (errors, unidentifiable)
}
