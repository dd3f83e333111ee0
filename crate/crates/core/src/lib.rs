pub mod analytics;
pub mod channel;
pub mod eavesdropper;
pub mod error;
pub mod experiment;
pub mod math;
pub mod montecarlo;
pub mod qpsk;
pub mod waveform;

pub use error::{Error, Result};
