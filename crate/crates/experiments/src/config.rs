use crate::ExperimentError;
use lindblad_engine::{DensityMatrix, EngineError};
use pulse_sequencer::{equilibrium_state, SequencerError};
use siv_model::{
    build_ground_hamiltonian, diagonalize, odmr_transitions, thermal_populations, EnergySpectrum,
    LineKind, MagneticField, OdmrLine, SivParameters,
};

/// Static strain calibrated so the two nuclear-preserving lines sit exactly
/// 54 MHz apart at the default field.
pub const OPERATING_STRAIN_ALPHA: f64 = 9382671233.057236;

/// Everything the scripted protocols share: one sample, one field orientation,
/// one pump and one drive calibration. Individual scans vary a single knob on
/// top of this.
#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    pub params: SivParameters,
    /// Field magnitude in tesla.
    pub field_tesla: f64,
    /// Field polar angle from the symmetry axis, degrees.
    pub field_polar_deg: f64,
    /// Field azimuth, degrees.
    pub field_azimuth_deg: f64,
    /// Sample temperature in kelvin.
    pub temperature: f64,
    /// Optical pump rate per source state, 1/s.
    pub pump_rate: f64,
    /// Duration of each pump segment, seconds.
    pub pump_duration: f64,
    /// Target effective Rabi frequency of the driven line, Hz. The drive
    /// amplitude is scaled up by the line's matrix element to realize it.
    pub rabi_effective: f64,
    /// Initialization-to-readout window for driven-evolution scans, seconds.
    pub readout_gap: f64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            params: SivParameters { strain_alpha: OPERATING_STRAIN_ALPHA, ..SivParameters::default() },
            field_tesla: 0.1,
            field_polar_deg: 109.0,
            field_azimuth_deg: 0.0,
            temperature: 3.6,
            pump_rate: 5e7,
            pump_duration: 100e-9,
            rabi_effective: 15e6,
            readout_gap: 210e-9,
        }
    }
}

impl ProtocolConfig {
    pub fn field(&self) -> MagneticField {
        MagneticField::new(
            self.field_tesla,
            self.field_polar_deg.to_radians(),
            self.field_azimuth_deg.to_radians(),
        )
    }
}

/// A diagonalized operating point: spectrum and line table computed once,
/// reused by every scan.
#[derive(Debug, Clone)]
pub struct Setup {
    pub config: ProtocolConfig,
    pub spectrum: EnergySpectrum,
    /// All four ground-state magnetic-dipole lines, ascending in frequency.
    pub lines: Vec<OdmrLine>,
}

impl Setup {
    pub fn new(config: ProtocolConfig) -> Result<Self, ExperimentError> {
        let h = build_ground_hamiltonian(&config.params, &config.field())?;
        let spectrum = diagonalize(&h, &config.params)?;
        let lines = odmr_transitions(&spectrum)?;
        let setup = Setup { config, spectrum, lines };
        if setup.nuclear_preserving_lines().len() != 2 {
            return Err(ExperimentError::Protocol(
                "expected exactly two nuclear-preserving lines".into(),
            ));
        }
        Ok(setup)
    }

    pub fn default_operating_point() -> Result<Self, ExperimentError> {
        Setup::new(ProtocolConfig::default())
    }

    pub fn nuclear_preserving_lines(&self) -> Vec<&OdmrLine> {
        self.lines.iter().filter(|l| l.kind == LineKind::NuclearPreserving).collect()
    }

    pub fn both_flipped_lines(&self) -> Vec<&OdmrLine> {
        self.lines.iter().filter(|l| l.kind == LineKind::BothFlipped).collect()
    }

    /// The stronger of the two main lines; scans drive this one by default.
    pub fn strongest_line(&self) -> &OdmrLine {
        let np = self.nuclear_preserving_lines();
        if np[0].strength >= np[1].strength {
            np[0]
        } else {
            np[1]
        }
    }

    /// Drive amplitude realizing `rabi_effective` on `line`. The spin-flip
    /// matrix element of an intra-branch line is far below 1/2 (the two spin
    /// sublevels carry nearly opposite orbital character), so the bare
    /// amplitude is scaled by 1 / (2 sqrt(strength)).
    pub fn drive_amplitude(&self, line: &OdmrLine) -> f64 {
        self.config.rabi_effective / (2.0 * line.strength.sqrt())
    }

    /// Canonical state a shot starts from: the fixed point of the undriven
    /// dissipative model. The single-frequency phonon network does not
    /// thermalize intra-branch splittings, so this differs from the Gibbs
    /// state at the percent level; starting shots here keeps recovered signal
    /// ratios inside [0, 1]. Falls back to the Gibbs state when the network
    /// has disconnected sectors (protected orientations, frozen rates).
    pub fn shot_start(&self) -> Result<DensityMatrix, ExperimentError> {
        if self.config.params.gamma0_orbital > 0.0 {
            match equilibrium_state(&self.spectrum, &self.config.params, self.config.temperature) {
                Ok(state) => return Ok(state),
                Err(SequencerError::Engine(EngineError::NonUniqueSteadyState { .. })) => {}
                Err(e) => return Err(e.into()),
            }
        }
        self.thermal_start()
    }

    /// Gibbs populations of the eigenstates at the configured temperature.
    pub fn thermal_start(&self) -> Result<DensityMatrix, ExperimentError> {
        let pops = thermal_populations(&self.spectrum, self.config.temperature)?;
        Ok(DensityMatrix::from_populations(&pops)?)
    }

    /// Same operating point with the phonon bath switched off.
    pub fn without_phonons(&self) -> Setup {
        let mut out = self.clone();
        out.config.params.gamma0_orbital = 0.0;
        out
    }

    /// Same operating point at a different temperature. The spectrum does not
    /// depend on temperature, so no rediagonalization happens.
    pub fn with_temperature(&self, temperature: f64) -> Setup {
        let mut out = self.clone();
        out.config.temperature = temperature;
        out
    }

    /// Configuration echo attached to every sweep result.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let c = &self.config;
        let p = &c.params;
        let pairs: Vec<(&str, f64)> = vec![
            ("lambda_so_hz", p.lambda_so),
            ("strain_alpha_hz", p.strain_alpha),
            ("strain_beta_hz", p.strain_beta),
            ("gamma_s_hz_per_t", p.gamma_s),
            ("gamma_l_hz_per_t", p.gamma_l),
            ("quench_f", p.quench_f),
            ("a_par_hz", p.a_par),
            ("a_perp_hz", p.a_perp),
            ("gamma_n_hz_per_t", p.gamma_n),
            ("gamma0_orbital_per_s", p.gamma0_orbital),
            ("gamma_phi_extra_per_s", p.gamma_phi_extra),
            ("field_tesla", c.field_tesla),
            ("field_polar_deg", c.field_polar_deg),
            ("field_azimuth_deg", c.field_azimuth_deg),
            ("temperature_k", c.temperature),
            ("pump_rate_per_s", c.pump_rate),
            ("pump_duration_s", c.pump_duration),
            ("rabi_effective_hz", c.rabi_effective),
            ("readout_gap_s", c.readout_gap),
        ];
        pairs.into_iter().map(|(k, v)| (k.to_string(), format!("{v:?}"))).collect()
    }
}
