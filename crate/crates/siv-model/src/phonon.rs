//! Single-phonon inter-branch relaxation: Bose-Einstein rates and secular jump
//! operators built from the orbital-flip coupling.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::constants::{H_PLANCK, K_BOLTZMANN};
use crate::operators::{op_orbital_flip, OperatorMatrix, DIM};
use crate::spectrum::{Branch, EnergySpectrum, SpinLabel};
use crate::{ModelError, SivParameters};

/// Mean phonon occupation 1/(e^(h nu / k_B T) - 1).
pub fn bose_occupation(nu: f64, temperature: f64) -> f64 {
    1.0 / ((H_PLANCK * nu / (K_BOLTZMANN * temperature)).exp_m1())
}

/// (gamma_up, gamma_down) = gamma_0 (n_bar, n_bar + 1). The ratio is the Boltzmann
/// factor e^(-h nu / k_B T) exactly and gamma_down - gamma_up = gamma_0 exactly.
pub fn phonon_rates(
    params: &SivParameters,
    nu: f64,
    temperature: f64,
) -> Result<(f64, f64), ModelError> {
    if !(temperature > 0.0) {
        return Err(ModelError::NonPositiveTemperature(temperature));
    }
    if !(nu > 0.0) {
        return Err(ModelError::NonFiniteParameter("nu"));
    }
    let nbar = bose_occupation(nu, temperature);
    Ok((params.gamma0_orbital * nbar, params.gamma0_orbital * (nbar + 1.0)))
}

/// Solve gamma_0 from a target downward lifetime: 2 T1_orbital = two_t1_orbital at
/// the reference temperature, with T1_orbital = 1/gamma_down.
pub fn calibrate_gamma0(two_t1_orbital: f64, nu: f64, temperature: f64) -> f64 {
    let nbar = bose_occupation(nu, temperature);
    (2.0 / two_t1_orbital) / (nbar + 1.0)
}

/// One secular inter-branch jump |to><from| in the eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononChannel {
    pub to: usize,
    pub from: usize,
    pub rate: f64,
}

/// Jump channels in index form. For each source state the destination weights are
/// w_mn = |<n|V|m>|^2 normalized over the opposite branch, V the orbital flip, so the
/// total departure rate is exactly gamma_up (lower sources) or gamma_down (upper).
pub fn phonon_channels(
    spectrum: &EnergySpectrum,
    rates: (f64, f64),
) -> Result<Vec<PhononChannel>, ModelError> {
    let (gamma_up, gamma_down) = rates;
    if gamma_up < 0.0 {
        return Err(ModelError::NegativeRate("gamma_up", gamma_up));
    }
    if gamma_down < 0.0 {
        return Err(ModelError::NegativeRate("gamma_down", gamma_down));
    }
    let v_eig = spectrum.states.adjoint() * op_orbital_flip() * &spectrum.states;
    let mut channels = Vec::with_capacity(32);
    for m in 0..DIM {
        let (dest_branch, rate) = match spectrum.labels[m].branch {
            Branch::Lower => (Branch::Upper, gamma_up),
            Branch::Upper => (Branch::Lower, gamma_down),
        };
        let dests = spectrum.branch_states(dest_branch);
        let mut weights: Vec<f64> = dests.iter().map(|&n| v_eig[(n, m)].norm_sqr()).collect();
        let total: f64 = weights.iter().sum();
        if total < 1e-18 {
            return Err(ModelError::DegenerateCoupling(m));
        }
        for w in &mut weights {
            *w /= total;
        }
        for (&n, &w) in dests.iter().zip(&weights) {
            channels.push(PhononChannel { to: n, from: m, rate: rate * w });
        }
    }
    Ok(channels)
}

/// Spec form of the channels: product-basis jump operators U |n><m| U^dagger with
/// their rates.
pub fn phonon_jump_operators(
    spectrum: &EnergySpectrum,
    rates: (f64, f64),
) -> Result<Vec<(OperatorMatrix, f64)>, ModelError> {
    let channels = phonon_channels(spectrum, rates)?;
    Ok(channels
        .into_iter()
        .map(|ch| {
            let mut e = DMatrix::<Complex64>::zeros(DIM, DIM);
            e[(ch.to, ch.from)] = Complex64::new(1.0, 0.0);
            (&spectrum.states * e * spectrum.states.adjoint(), ch.rate)
        })
        .collect())
}

/// Total rate over all channels whose electron-spin label flips. The aligned-field
/// protection bound compares this against gamma_down.
pub fn total_spin_flip_rate(spectrum: &EnergySpectrum, channels: &[PhononChannel]) -> f64 {
    channels
        .iter()
        .filter(|ch| spectrum.labels[ch.to].spin != spectrum.labels[ch.from].spin)
        .map(|ch| ch.rate)
        .sum()
}

/// Spin labels partition each branch into up/down pairs; a channel preserves spin when
/// the labels match.
pub fn spin_preserved(spectrum: &EnergySpectrum, ch: &PhononChannel) -> bool {
    let a = &spectrum.labels[ch.from];
    let b = &spectrum.labels[ch.to];
    matches!(
        (a.spin, b.spin),
        (SpinLabel::Up, SpinLabel::Up) | (SpinLabel::Down, SpinLabel::Down)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{build_ground_hamiltonian, diagonalize, MagneticField};

    #[test]
    fn rate_identities() {
        let params = SivParameters::default();
        for nu in [20e9, 50e9, 80e9] {
            for t in [3.0, 4.0, 7.0, 10.0] {
                let (up, down) = phonon_rates(&params, nu, t).unwrap();
                let boltzmann = (-H_PLANCK * nu / (K_BOLTZMANN * t)).exp();
                assert!((up / down - boltzmann).abs() < 1e-12 * boltzmann);
                assert!((down - up - params.gamma0_orbital).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn calibration_hits_target() {
        let g0 = calibrate_gamma0(133e-9, 50e9, 3.6);
        let params = SivParameters { gamma0_orbital: g0, ..SivParameters::default() };
        let (_, down) = phonon_rates(&params, 50e9, 3.6).unwrap();
        assert!((1.0 / down - 66.5e-9).abs() < 1e-15);
    }

    #[test]
    fn departure_rates_normalized() {
        let params = SivParameters { strain_alpha: 9.3827e9, ..SivParameters::default() };
        let field = MagneticField::from_degrees(0.1, 109.0, 0.0);
        let h = build_ground_hamiltonian(&params, &field).unwrap();
        let spec = diagonalize(&h, &params).unwrap();
        let (up, down) = phonon_rates(&params, params.lambda_so, 3.6).unwrap();
        let channels = phonon_channels(&spec, (up, down)).unwrap();
        for m in 0..DIM {
            let total: f64 =
                channels.iter().filter(|c| c.from == m).map(|c| c.rate).sum();
            let expect = match spec.labels[m].branch {
                Branch::Lower => up,
                Branch::Upper => down,
            };
            assert!((total - expect).abs() < 1e-12 * expect.max(1.0));
        }
    }

    #[test]
    fn aligned_field_protects_spin() {
        let params = SivParameters {
            a_perp: 0.0,
            strain_alpha: 9.3827e9,
            ..SivParameters::default()
        };
        let field = MagneticField::from_degrees(0.1, 0.0, 0.0);
        let h = build_ground_hamiltonian(&params, &field).unwrap();
        let spec = diagonalize(&h, &params).unwrap();
        let rates = phonon_rates(&params, params.lambda_so, 3.6).unwrap();
        let channels = phonon_channels(&spec, rates).unwrap();
        let flip = total_spin_flip_rate(&spec, &channels);
        assert!(flip < 1e-9 * rates.1, "spin flip rate {flip} vs gamma_down {}", rates.1);
    }

    #[test]
    fn tilted_field_opens_spin_flips() {
        let params = SivParameters { strain_alpha: 9.3827e9, ..SivParameters::default() };
        let field = MagneticField::from_degrees(0.1, 109.0, 0.0);
        let h = build_ground_hamiltonian(&params, &field).unwrap();
        let spec = diagonalize(&h, &params).unwrap();
        let rates = phonon_rates(&params, params.lambda_so, 3.6).unwrap();
        let channels = phonon_channels(&spec, rates).unwrap();
        assert!(total_spin_flip_rate(&spec, &channels) > 0.0);
    }
}
