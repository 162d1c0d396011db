//! Function-value binary expansion (FBE) of transcendental functions.
//!
//! The crate has three layers:
//!
//! * [`fixedpoint`] and [`fbe`]: exact two's-complement arithmetic and the classical
//!   digit recurrences (forward expansion for logarithm / inverse trigonometric
//!   functions, inverse expansion for exponential / trigonometric functions).
//! * [`circuit`] and [`blocks`]: a reversible gate IR with exact basis-state and
//!   sparse simulation, plus reversible arithmetic building blocks.
//! * [`synth`] and [`verify`]: the six top-level circuits and the suites that
//!   cross-check them against the recurrences and their error bounds.

pub mod blocks;
pub mod circuit;
pub mod error;
pub mod fbe;
pub mod fixedpoint;
pub mod synth;
pub mod verify;

pub use error::{Error, Result};
pub use fixedpoint::{FixedPoint, Layout};
