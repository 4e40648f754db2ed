use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::constants::{H_PLANCK, K_BOLTZMANN};
use crate::operators::OperatorMatrix;
use crate::spectrum::EnergySpectrum;
use crate::ModelError;

/// Gibbs state exp(-h E_k / k_B T)/Z in the eigenbasis, rotated back to the product
/// basis. Energies are referenced to the ground state before exponentiation so the
/// weights stay finite at any temperature.
pub fn thermal_state(
    spectrum: &EnergySpectrum,
    temperature: f64,
) -> Result<OperatorMatrix, ModelError> {
    if !(temperature > 0.0) {
        return Err(ModelError::NonPositiveTemperature(temperature));
    }
    let e0 = spectrum.energies.iter().copied().fold(f64::INFINITY, f64::min);
    let beta = H_PLANCK / (K_BOLTZMANN * temperature);
    let weights: Vec<f64> =
        spectrum.energies.iter().map(|&e| (-(e - e0) * beta).exp()).collect();
    let z: f64 = weights.iter().sum();
    let n = spectrum.energies.len();
    let mut diag = DMatrix::<Complex64>::zeros(n, n);
    for (k, w) in weights.iter().enumerate() {
        diag[(k, k)] = Complex64::new(w / z, 0.0);
    }
    Ok(&spectrum.states * diag * spectrum.states.adjoint())
}

/// Populations of the thermal state in the eigenbasis; convenience for drivers
/// that work with rate equations.
pub fn thermal_populations(spectrum: &EnergySpectrum, temperature: f64) -> Result<Vec<f64>, ModelError> {
    if !(temperature > 0.0) {
        return Err(ModelError::NonPositiveTemperature(temperature));
    }
    let e0 = spectrum.energies.iter().copied().fold(f64::INFINITY, f64::min);
    let beta = H_PLANCK / (K_BOLTZMANN * temperature);
    let w: Vec<f64> = spectrum.energies.iter().map(|&e| (-(e - e0) * beta).exp()).collect();
    let z: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / z).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{build_ground_hamiltonian, diagonalize, MagneticField, SivParameters};

    fn default_spectrum() -> EnergySpectrum {
        let params = SivParameters::default();
        let field = MagneticField::from_degrees(0.0, 0.0, 0.0);
        let h = build_ground_hamiltonian(&params, &field).unwrap();
        diagonalize(&h, &params).unwrap()
    }

    #[test]
    fn infinite_temperature_limit() {
        let spec = default_spectrum();
        let rho = thermal_state(&spec, 1e6).unwrap();
        for k in 0..8 {
            assert!((rho[(k, k)].re - 0.125).abs() < 1e-6);
        }
    }

    #[test]
    fn populations_non_increasing_in_energy() {
        let params = SivParameters { strain_alpha: 9.3827e9, ..SivParameters::default() };
        let field = MagneticField::from_degrees(0.1, 109.0, 0.0);
        let h = build_ground_hamiltonian(&params, &field).unwrap();
        let spec = diagonalize(&h, &params).unwrap();
        let p = thermal_populations(&spec, 3.6).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.windows(2).all(|w| w[0] >= w[1] - 1e-15));
    }

    #[test]
    fn rejects_non_positive_temperature() {
        let spec = default_spectrum();
        assert!(thermal_state(&spec, 0.0).is_err());
        assert!(thermal_state(&spec, -1.0).is_err());
    }
}
