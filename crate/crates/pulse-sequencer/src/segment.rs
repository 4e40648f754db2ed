use crate::SequencerError;

/// One piecewise-constant interval of a pulse protocol. Frequencies in Hz, rates in
/// 1/s, durations in s, phase in rad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseSegment {
    /// Incoherent optical pumping out of the lower-branch spin-up states.
    OpticalPump { rate: f64, duration: f64 },
    /// Resonant or near-resonant microwave drive, treated in the rotating frame.
    MicrowaveDrive { carrier: f64, rabi_amplitude: f64, phase: f64, duration: f64 },
    /// Free evolution.
    Wait { duration: f64 },
}

impl PulseSegment {
    pub fn duration(&self) -> f64 {
        match *self {
            PulseSegment::OpticalPump { duration, .. }
            | PulseSegment::MicrowaveDrive { duration, .. }
            | PulseSegment::Wait { duration } => duration,
        }
    }

    pub fn is_optical(&self) -> bool {
        matches!(self, PulseSegment::OpticalPump { .. })
    }

    pub fn carrier(&self) -> Option<f64> {
        match *self {
            PulseSegment::MicrowaveDrive { carrier, .. } => Some(carrier),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), SequencerError> {
        let bad = |what: &str, v: f64| {
            Err(SequencerError::InvalidSegment(format!("{what} must be finite and >= 0, got {v}")))
        };
        if !(self.duration() >= 0.0) || !self.duration().is_finite() {
            return bad("duration", self.duration());
        }
        match *self {
            PulseSegment::OpticalPump { rate, .. } => {
                if !(rate >= 0.0) || !rate.is_finite() {
                    return bad("pump rate", rate);
                }
            }
            PulseSegment::MicrowaveDrive { carrier, rabi_amplitude, phase, .. } => {
                if !(rabi_amplitude >= 0.0) || !rabi_amplitude.is_finite() {
                    return bad("rabi amplitude", rabi_amplitude);
                }
                if !(carrier > 0.0) || !carrier.is_finite() {
                    return Err(SequencerError::InvalidSegment(format!(
                        "carrier must be finite and > 0, got {carrier}"
                    )));
                }
                if !phase.is_finite() {
                    return Err(SequencerError::InvalidSegment(format!(
                        "phase must be finite, got {phase}"
                    )));
                }
            }
            PulseSegment::Wait { .. } => {}
        }
        Ok(())
    }
}

/// Default trace spacing: 1 ns, mirroring binned photon counting.
pub const DEFAULT_SAMPLE_RESOLUTION: f64 = 1e-9;

/// An ordered pulse protocol. All microwave segments must share one carrier because
/// the whole sequence evolves in a single rotating frame; Wait segments then
/// accumulate Ramsey phase at the detuning rather than at the bare line frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub segments: Vec<PulseSegment>,
    pub sample_resolution: f64,
}

impl PulseSequence {
    pub fn new(segments: Vec<PulseSegment>) -> Result<Self, SequencerError> {
        Self::with_resolution(segments, DEFAULT_SAMPLE_RESOLUTION)
    }

    pub fn with_resolution(
        segments: Vec<PulseSegment>,
        sample_resolution: f64,
    ) -> Result<Self, SequencerError> {
        let seq = PulseSequence { segments, sample_resolution };
        seq.validate()?;
        Ok(seq)
    }

    pub fn validate(&self) -> Result<(), SequencerError> {
        if !(self.sample_resolution > 0.0) || !self.sample_resolution.is_finite() {
            return Err(SequencerError::BadResolution(self.sample_resolution));
        }
        for seg in &self.segments {
            seg.validate()?;
        }
        let mut carrier = None;
        for seg in &self.segments {
            if let Some(f) = seg.carrier() {
                match carrier {
                    None => carrier = Some(f),
                    Some(first) if first != f => {
                        return Err(SequencerError::MultipleCarriers { first, second: f });
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    }

    /// The shared microwave carrier, if any segment drives.
    pub fn carrier(&self) -> Option<f64> {
        self.segments.iter().find_map(PulseSegment::carrier)
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(PulseSegment::duration).sum()
    }
}
