use crate::ExperimentError;
use serde::Serialize;

/// Inclusive, uniformly spaced scan of one knob.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, ExperimentError> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(ExperimentError::InvalidSweep(format!(
                "bounds must be finite, got {start}..{stop}"
            )));
        }
        if !(start < stop) {
            return Err(ExperimentError::InvalidSweep(format!(
                "start must lie below stop, got {start}..{stop}"
            )));
        }
        if count < 2 {
            return Err(ExperimentError::InvalidSweep(format!(
                "need at least two points, got {count}"
            )));
        }
        Ok(SweepSpec { start, stop, count })
    }

    /// Grid points, ascending; the endpoints are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + i as f64 * step })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Column {
    /// Name with the unit baked in, e.g. `wait_s` or `peak_ratio`.
    pub name: String,
    pub values: Vec<f64>,
}

impl Column {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Column { name: name.into(), values }
    }
}

/// One completed scan: the swept abscissa, one or more observable columns and
/// a full configuration echo. Rows are ordered by ascending abscissa.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub experiment: String,
    pub abscissa: Column,
    pub columns: Vec<Column>,
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        if self.abscissa.name == name {
            return Some(&self.abscissa.values);
        }
        self.columns.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }

    pub fn len(&self) -> usize {
        self.abscissa.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.values.is_empty()
    }

    /// Structural invariants every scan promises: rectangular, finite, sorted.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let n = self.abscissa.values.len();
        for c in std::iter::once(&self.abscissa).chain(self.columns.iter()) {
            if c.values.len() != n {
                return Err(ExperimentError::Protocol(format!(
                    "column {} has {} rows, expected {n}",
                    c.name,
                    c.values.len()
                )));
            }
            if let Some(bad) = c.values.iter().find(|v| !v.is_finite()) {
                return Err(ExperimentError::Protocol(format!(
                    "column {} contains non-finite value {bad}",
                    c.name
                )));
            }
        }
        if self.abscissa.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExperimentError::Protocol(format!(
                "abscissa {} is not strictly increasing",
                self.abscissa.name
            )));
        }
        Ok(())
    }
}
