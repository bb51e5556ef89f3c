//! Two-qubit entanglement and teleportation dynamics under independent
//! longitudinal/transverse relaxation channels, in the Bloch (Fano)
//! representation.
//!
//! Start with [`qstate`] for state conversions, [`channel`] for the
//! relaxation map, then [`entanglement`] and [`teleport`] for the figures
//! of merit. [`curve`] and [`figures`] produce time series.

pub mod channel;
pub mod curve;
pub mod entanglement;
pub mod error;
pub mod figures;
pub mod numerics;
pub mod qstate;
pub mod sampling;
pub mod teleport;
pub mod validate;

pub use error::{Error, Result};
