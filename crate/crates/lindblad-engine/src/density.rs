use crate::EngineError;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Validated quantum state. Invariants enforced on construction and after every
/// propagation step: Hermitian to 1e-10, unit trace to 1e-10, smallest eigenvalue
/// above -1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

pub(crate) const HERMITICITY_TOL: f64 = 1e-10;
pub(crate) const TRACE_TOL: f64 = 1e-10;
pub(crate) const EIGENVALUE_FLOOR: f64 = -1e-9;

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, EngineError> {
        let rho = DensityMatrix { matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Basis state |k><k|.
    pub fn pure_basis(dim: usize, k: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        DensityMatrix { matrix: m }
    }

    /// Diagonal state from a population vector; normalizes the sum.
    pub fn from_populations(pops: &[f64]) -> Result<Self, EngineError> {
        let total: f64 = pops.iter().sum();
        if !(total > 0.0) || pops.iter().any(|p| *p < 0.0 || !p.is_finite()) {
            return Err(EngineError::InvalidDensity {
                invariant: "populations non-negative with positive sum",
                value: total,
            });
        }
        let dim = pops.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (k, p) in pops.iter().enumerate() {
            m[(k, k)] = Complex64::new(p / total, 0.0);
        }
        Ok(DensityMatrix { matrix: m })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0));
        DensityMatrix { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|k| self.matrix[(k, k)]).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.matrix[(k, k)].re).collect()
    }

    /// tr(rho^2); equals the squared Frobenius norm for Hermitian rho.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trace distance (1/2)||rho - sigma||_1.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let d = (&self.matrix - &other.matrix) * Complex64::new(0.5, 0.0);
        let herm = (&d + d.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigen().eigenvalues.iter().map(|e| e.abs()).sum()
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let n = self.dim();
        if self.matrix.ncols() != n {
            return Err(EngineError::DimensionMismatch {
                expected: n,
                found_rows: n,
                found_cols: self.matrix.ncols(),
            });
        }
        let mut asym = 0.0_f64;
        for r in 0..n {
            for c in 0..n {
                asym = asym.max((self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm());
            }
        }
        if asym > HERMITICITY_TOL {
            return Err(EngineError::InvalidDensity { invariant: "Hermiticity", value: asym });
        }
        let tr = self.trace();
        let tr_err = (tr - Complex64::new(1.0, 0.0)).norm();
        if tr_err > TRACE_TOL {
            return Err(EngineError::InvalidDensity { invariant: "unit trace", value: tr_err });
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < EIGENVALUE_FLOOR {
            return Err(EngineError::InvalidDensity {
                invariant: "positivity (minimum eigenvalue)",
                value: min_eig,
            });
        }
        Ok(())
    }

    /// Symmetrize and rescale to unit trace without touching eigenvalues beyond
    /// rounding. Used after propagation; genuine negativity still fails validation.
    pub(crate) fn hygiene(mut matrix: DMatrix<Complex64>) -> DMatrix<Complex64> {
        let herm = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        matrix = herm;
        let tr: Complex64 = (0..matrix.nrows()).map(|k| matrix[(k, k)]).sum();
        if tr.norm() > 0.0 {
            matrix /= tr;
        }
        matrix
    }
}
