//! Two-qubit states, single-qubit channels and ancilla-assisted process tomography.

pub mod channels;
pub mod error;
pub mod faithfulness;
pub mod formats;
pub mod geometry;
pub mod numeric;
pub mod pauli;
pub mod rng;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
