use crate::EngineError;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// A time-independent Lindblad generator: Hamiltonian in Hz plus collapse operators
/// with rates in 1/s. The 2*pi sits in the Liouvillian, not here.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    pub hamiltonian: DMatrix<Complex64>,
    pub collapse_ops: Vec<(DMatrix<Complex64>, f64)>,
}

impl LindbladModel {
    pub fn new(
        hamiltonian: DMatrix<Complex64>,
        collapse_ops: Vec<(DMatrix<Complex64>, f64)>,
    ) -> Result<Self, EngineError> {
        let n = hamiltonian.nrows();
        if hamiltonian.ncols() != n {
            return Err(EngineError::DimensionMismatch {
                expected: n,
                found_rows: hamiltonian.nrows(),
                found_cols: hamiltonian.ncols(),
            });
        }
        for (c, rate) in &collapse_ops {
            if c.nrows() != n || c.ncols() != n {
                return Err(EngineError::DimensionMismatch {
                    expected: n,
                    found_rows: c.nrows(),
                    found_cols: c.ncols(),
                });
            }
            if !rate.is_finite() || *rate < 0.0 {
                return Err(EngineError::NegativeRate(*rate));
            }
        }
        Ok(LindbladModel { hamiltonian, collapse_ops })
    }

    /// Hamiltonian only, no dissipation.
    pub fn closed(hamiltonian: DMatrix<Complex64>) -> Result<Self, EngineError> {
        LindbladModel::new(hamiltonian, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }
}
