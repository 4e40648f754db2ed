use crate::ModelError;

/// External magnetic field in spherical coordinates relative to the SiV symmetry axis.
/// Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticField {
    pub magnitude: f64,
    pub polar_angle: f64,
    pub azimuth: f64,
}

impl MagneticField {
    pub fn new(magnitude: f64, polar_angle: f64, azimuth: f64) -> Self {
        MagneticField { magnitude, polar_angle, azimuth }
    }

    pub fn from_degrees(magnitude: f64, polar_deg: f64, azimuth_deg: f64) -> Self {
        MagneticField {
            magnitude,
            polar_angle: polar_deg.to_radians(),
            azimuth: azimuth_deg.to_radians(),
        }
    }

    /// (Bx, By, Bz) with z along the symmetry axis.
    pub fn cartesian(&self) -> [f64; 3] {
        let s = self.polar_angle.sin();
        [
            self.magnitude * s * self.azimuth.cos(),
            self.magnitude * s * self.azimuth.sin(),
            self.magnitude * self.polar_angle.cos(),
        ]
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.magnitude.is_finite() || !self.polar_angle.is_finite() || !self.azimuth.is_finite()
        {
            return Err(ModelError::NonFiniteParameter("magnetic field"));
        }
        if self.magnitude < 0.0 {
            return Err(ModelError::NegativeField(self.magnitude));
        }
        Ok(())
    }
}
