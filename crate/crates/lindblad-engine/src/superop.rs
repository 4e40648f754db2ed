use crate::LindbladModel;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Column-major vectorization, matching nalgebra's storage order. Under it
/// vec(A rho B) = kron(B^T, A) vec(rho), which fixes every kron order below.
pub fn vectorize(m: &DMatrix<Complex64>) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &nalgebra::DVector<Complex64>, dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(dim, dim, v.as_slice())
}

/// Build the dim^2 x dim^2 generator L with
/// d(vec rho)/dt = L vec(rho),
/// drho/dt = -2*pi*i [H, rho] + sum_k gamma_k (C rho C^dag - 1/2 {C^dag C, rho}).
pub fn liouvillian(model: &LindbladModel) -> DMatrix<Complex64> {
    let n = model.dim();
    let eye = DMatrix::<Complex64>::identity(n, n);
    let h = &model.hamiltonian;

    let mut l = (eye.kronecker(h) - h.transpose().kronecker(&eye)) * Complex64::new(0.0, -TAU);

    for (c, rate) in &model.collapse_ops {
        if *rate == 0.0 {
            continue;
        }
        let g = Complex64::new(*rate, 0.0);
        let half = Complex64::new(0.5 * rate, 0.0);
        let cdc = c.adjoint() * c;
        l += c.conjugate().kronecker(c) * g;
        l -= eye.kronecker(&cdc) * half;
        l -= cdc.transpose().kronecker(&eye) * half;
    }
    l
}
