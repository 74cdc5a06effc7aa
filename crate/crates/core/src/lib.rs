#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod cli;
pub mod error;
pub mod numerics;
pub mod phasespace;
pub mod protocol;
mod serde_ext;
pub mod simulate;
pub mod spectra;

pub use classical::{EnergyWindow, ModelSystem};
pub use error::{Error, Result};
pub use spectra::SpectrumSlice;
