//! Column-layered scaled Min-Sum LDPC decoding with incrementally updated
//! per-check sorted magnitude vectors, plus flooding and row-layered
//! references, a fixed-point AWGN Monte-Carlo harness and event census.

pub mod census;
pub mod channel;
pub mod code;
pub mod decoders;
pub mod error;
pub mod fixed;
pub mod kernel;
pub mod sim;

pub use code::ParityCheckMatrix;
pub use decoders::{decode, DecodeConfig, DecodeResult, Variant};
pub use error::{CodeError, DecodeError, SimError};
pub use fixed::{FixedPointFormat, Msg, Sign};
