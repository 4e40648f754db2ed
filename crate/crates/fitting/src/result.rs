/// Outcome of a least-squares fit. Values are always populated, even when the
/// optimizer gave up; `converged == false` together with `warnings` marks
/// results that should not be trusted blindly.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub names: Vec<&'static str>,
    pub values: Vec<f64>,
    /// Asymptotic standard errors from the local curvature at the optimum.
    /// Infinite for directions the data does not constrain, zero for
    /// parameters that were held fixed.
    pub std_errors: Vec<f64>,
    pub residual_sum_of_squares: f64,
    pub converged: bool,
    pub iterations: usize,
    pub warnings: Vec<String>,
}

impl FitResult {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| *n == name).map(|i| self.values[i])
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| *n == name).map(|i| self.std_errors[i])
    }
}
