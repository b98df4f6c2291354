//! Sparse wavelet filtering of time series by the Ramachandran–Ranganathan
//! runs criterion, with minimax wavelet thresholding as the reference.

pub mod bench;
pub mod datagen;
pub mod error;
pub mod ga;
pub mod ingest;
pub mod pipeline;
pub mod runs;
pub mod threshold;
pub mod wavelet;

pub use error::{Error, Result};
