//! Pulse protocols on the spin model: segments compile to piecewise-constant
//! Lindblad generators (microwave drives in the rotating-wave approximation), and
//! sequences run in one shared rotating frame to produce fluorescence traces and
//! the peak-ratio observable.
//!
//! Everything here works in the eigenbasis of the spectrum a sequence is compiled
//! against: initial states, trace populations and pump source indices all refer to
//! eigenstates ordered by energy.

mod compile;
mod error;
mod run;
mod segment;

pub use compile::{compile_segment, compile_segment_in_frame, CompiledSegment, CARRIER_WINDOW};
pub use error::SequencerError;
pub use run::{
    equilibrium_state, half_pi_duration, peak_ratio, pi_duration, run_sequence,
    sequence_peak_ratio, SegmentMarker, SimulationTrace,
};
pub use segment::{PulseSegment, PulseSequence, DEFAULT_SAMPLE_RESOLUTION};
