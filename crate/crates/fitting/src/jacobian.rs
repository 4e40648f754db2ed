use nalgebra::{DMatrix, DVector};

/// Relative step used for all numerical derivatives.
pub const JACOBIAN_REL_STEP: f64 = 1e-6;

/// Central-difference Jacobian of a residual vector. `scales[i]` is the
/// characteristic magnitude of parameter i; the actual step is
/// `rel_step * scales[i]`, which keeps the stencil sane for parameters whose
/// current value passes through zero.
pub fn numerical_jacobian<F>(
    residuals: &F,
    params: &[f64],
    scales: &[f64],
    rel_step: f64,
) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> DVector<f64>,
{
    let n_res = residuals(params).len();
    let mut jac = DMatrix::zeros(n_res, params.len());
    let mut work = params.to_vec();
    for (j, &scale) in scales.iter().enumerate() {
        let h = rel_step * scale;
        work[j] = params[j] + h;
        let plus = residuals(&work);
        work[j] = params[j] - h;
        let minus = residuals(&work);
        work[j] = params[j];
        let col = (plus - minus) / (2.0 * h);
        jac.set_column(j, &col);
    }
    jac
}
