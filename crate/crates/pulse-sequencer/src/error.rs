use lindblad_engine::EngineError;
use siv_model::ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SequencerError {
    #[error("invalid segment: {0}")]
    InvalidSegment(String),

    #[error("sequence mixes microwave carriers {first} Hz and {second} Hz; a sequence has a single rotating frame")]
    MultipleCarriers { first: f64, second: f64 },

    #[error("sample resolution must be positive and finite, got {0}")]
    BadResolution(f64),

    #[error(
        "carrier {carrier} Hz is out of band: nearest lower-branch spin-flip line at {nearest} Hz, allowed window +-{window} Hz"
    )]
    CarrierOutOfBand { carrier: f64, nearest: f64, window: f64 },

    #[error("protocol error: {0}")]
    Protocol(&'static str),

    #[error("initialisation fluorescence is zero, peak ratio undefined")]
    DegenerateSignal,

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Engine(#[from] EngineError),
}
