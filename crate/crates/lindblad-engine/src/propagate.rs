use crate::density::DensityMatrix;
use crate::superop::{liouvillian, unvectorize, vectorize};
use crate::{expm, EngineError, LindbladModel};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::TAU;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Propagator exp(L * duration) acting on vectorized states. Precompute once and
/// reuse via apply_propagator when stepping a trace at fixed resolution.
pub fn propagator(model: &LindbladModel, duration: f64) -> Result<DMatrix<Complex64>, EngineError> {
    if !(duration >= 0.0) {
        return Err(EngineError::NegativeDuration(duration));
    }
    let l = liouvillian(model) * Complex64::new(duration, 0.0);
    Ok(expm(&l))
}

/// Apply a precomputed propagator, then symmetrize, renormalize and revalidate.
pub fn apply_propagator(
    prop: &DMatrix<Complex64>,
    rho: &DensityMatrix,
) -> Result<DensityMatrix, EngineError> {
    let n = rho.dim();
    if prop.nrows() != n * n || prop.ncols() != n * n {
        return Err(EngineError::DimensionMismatch {
            expected: n * n,
            found_rows: prop.nrows(),
            found_cols: prop.ncols(),
        });
    }
    let v = prop * vectorize(rho.matrix());
    let evolved = DensityMatrix::hygiene(unvectorize(&v, n));
    DensityMatrix::new(evolved).map_err(promote_to_instability)
}

fn promote_to_instability(e: EngineError) -> EngineError {
    match e {
        EngineError::InvalidDensity { invariant, value } => {
            EngineError::NumericalInstability { invariant, value }
        }
        other => other,
    }
}

/// Exact evolution rho(t) = unvec(exp(L t) vec(rho0)).
pub fn evolve(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    duration: f64,
) -> Result<DensityMatrix, EngineError> {
    if !(duration >= 0.0) {
        return Err(EngineError::NegativeDuration(duration));
    }
    if model.dim() != rho0.dim() {
        return Err(EngineError::DimensionMismatch {
            expected: model.dim(),
            found_rows: rho0.dim(),
            found_cols: rho0.dim(),
        });
    }
    if duration == 0.0 {
        let m = DensityMatrix::hygiene(rho0.matrix().clone());
        return DensityMatrix::new(m).map_err(promote_to_instability);
    }
    apply_propagator(&propagator(model, duration)?, rho0)
}

/// Effective non-Hermitian drift K = -2*pi*i*H - (1/2) sum gamma C^dag C, so the
/// master equation reads drho/dt = K rho + rho K^dag + sum gamma C rho C^dag.
fn drift_operator(model: &LindbladModel) -> DMatrix<Complex64> {
    let n = model.dim();
    let mut k = &model.hamiltonian * Complex64::new(0.0, -TAU);
    for (c, rate) in &model.collapse_ops {
        if *rate > 0.0 {
            let cdc = c.adjoint() * c;
            k -= cdc * Complex64::new(0.5 * rate, 0.0);
        }
    }
    debug_assert_eq!(k.nrows(), n);
    k
}

/// Classic fixed-step 4th-order integration of the same generator, written at the
/// density-matrix level (no superoperator) so it stays an independent cross-check
/// of the exponential path.
pub fn evolve_rk4(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    duration: f64,
    step: f64,
) -> Result<DensityMatrix, EngineError> {
    if !(duration >= 0.0) {
        return Err(EngineError::NegativeDuration(duration));
    }
    if duration == 0.0 {
        return Ok(rho0.clone());
    }
    if !(step > 0.0) {
        return Err(EngineError::NonPositiveStep(step));
    }
    let n = model.dim();
    if n != rho0.dim() {
        return Err(EngineError::DimensionMismatch {
            expected: n,
            found_rows: rho0.dim(),
            found_cols: rho0.dim(),
        });
    }

    let k_op = drift_operator(model);
    let k_dag = k_op.adjoint();
    let channels: Vec<(DMatrix<Complex64>, DMatrix<Complex64>, Complex64)> = model
        .collapse_ops
        .iter()
        .filter(|(_, rate)| *rate > 0.0)
        .map(|(c, rate)| (c.clone(), c.adjoint(), Complex64::new(*rate, 0.0)))
        .collect();

    // out = K rho + rho K^dag + sum gamma C rho C^dag, allocation-free inner loop
    let rhs = |out: &mut DMatrix<Complex64>,
                   rho: &DMatrix<Complex64>,
                   scratch: &mut DMatrix<Complex64>| {
        out.gemm(ONE, &k_op, rho, ZERO);
        out.gemm(ONE, rho, &k_dag, ONE);
        for (c, c_dag, g) in &channels {
            scratch.gemm(ONE, c, rho, ZERO);
            out.gemm(*g, scratch, c_dag, ONE);
        }
    };

    let n_steps = (duration / step).ceil().max(1.0) as usize;
    let h = duration / n_steps as f64;
    let hc = |s: f64| Complex64::new(h * s, 0.0);
    // y += alpha * x, elementwise and allocation-free
    fn acc(y: &mut DMatrix<Complex64>, alpha: Complex64, x: &DMatrix<Complex64>) {
        y.iter_mut().zip(x.iter()).for_each(|(a, b)| *a += alpha * b);
    }

    let mut rho = rho0.matrix().clone();
    let mut stage = DMatrix::<Complex64>::zeros(n, n);
    let mut scratch = DMatrix::<Complex64>::zeros(n, n);
    let mut k1 = DMatrix::<Complex64>::zeros(n, n);
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();

    for _ in 0..n_steps {
        rhs(&mut k1, &rho, &mut scratch);
        stage.copy_from(&rho);
        acc(&mut stage, hc(0.5), &k1);
        rhs(&mut k2, &stage, &mut scratch);
        stage.copy_from(&rho);
        acc(&mut stage, hc(0.5), &k2);
        rhs(&mut k3, &stage, &mut scratch);
        stage.copy_from(&rho);
        acc(&mut stage, hc(1.0), &k3);
        rhs(&mut k4, &stage, &mut scratch);

        acc(&mut rho, hc(1.0 / 6.0), &k1);
        acc(&mut rho, hc(2.0 / 6.0), &k2);
        acc(&mut rho, hc(2.0 / 6.0), &k3);
        acc(&mut rho, hc(1.0 / 6.0), &k4);

        // the generator is exactly traceless, so any drift is accumulated rounding
        // or outright divergence; NaN must fail too, hence the negated comparison
        let tr: Complex64 = (0..n).map(|k| rho[(k, k)]).sum();
        let drift = (tr - ONE).norm();
        if !(drift <= 1e-6) {
            return Err(EngineError::StepTooLarge { drift });
        }
    }

    let m = DensityMatrix::hygiene(rho);
    DensityMatrix::new(m).map_err(promote_to_instability)
}

/// Null-space steady state: the one-dimensional kernel of L, normalized to trace
/// one. Kernels of higher dimension are reported, not resolved.
pub fn steady_state(model: &LindbladModel) -> Result<DensityMatrix, EngineError> {
    let n = model.dim();
    let l = liouvillian(model);
    let svd = l.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("svd requested with right singular vectors");

    let smax = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        // L = 0: every state is stationary
        return Err(EngineError::NonUniqueSteadyState { nullity: n * n });
    }
    // the trace functional is always a left null vector, so at least one singular
    // value sits at rounding level; the threshold must clear it while staying far
    // below the slowest genuine relaxation rate
    let tol = 1e-11 * smax;
    let nullity = svd.singular_values.iter().filter(|&&s| s <= tol).count().max(1);
    if nullity > 1 {
        return Err(EngineError::NonUniqueSteadyState { nullity });
    }
    let kmin = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty singular values")
        .0;
    let v: DVector<Complex64> = DVector::from_iterator(n * n, (0..n * n).map(|c| v_t[(kmin, c)].conj()));
    let raw = unvectorize(&v, n);

    // dividing by the complex trace fixes both the arbitrary phase and the scale
    let tr: Complex64 = (0..n).map(|k| raw[(k, k)]).sum();
    if tr.norm() < 1e-10 * raw.norm() {
        return Err(EngineError::TracelessKernel);
    }
    let normalized = DensityMatrix::hygiene(raw / tr);
    DensityMatrix::new(normalized).map_err(promote_to_instability)
}
