//! Coherence and entanglement of a pair of Unruh-DeWitt detectors when one
//! of them is uniformly accelerated.
//!
//! [`model`] builds the evolved two-detector state and [`measures`] turns it
//! into coherence and entanglement numbers. [`analysis`] asks when those
//! numbers stop moving with the acceleration, or drop to zero.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod measures;
pub mod model;
pub mod numerics;
mod trace_distance;

pub use error::{Error, Result};
pub use measures::MeasureReport;
pub use model::{ChannelParams, FinalStateParams, InitialStateParams, PhysicalParams};
pub use numerics::{ComplexMatrix, HermitianSpectrum, Subsystem, C64};
