//! Minimax-rule hard thresholding, the reference filter.
//!
//! The number of coefficients it keeps is the budget `K` handed to the
//! runs-criterion filter, so both methods are compared at equal sparsity.

use crate::error::{Error, Result};
use crate::wavelet::{dwt_max, SparseWaveletModel, TimeSeries, WaveletBasisSpec, WaveletDecomposition};

/// Normal quartile constant of the MAD noise estimate.
pub const MAD_NORMAL_CONSTANT: f64 = 0.6745;

/// Coefficients below this fraction of the largest magnitude are treated as
/// round-off, even when the noise estimate is zero.
const ROUNDOFF_FRACTION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub model: SparseWaveletModel,
    pub threshold: f64,
    pub sigma_hat: f64,
    pub k_nonzero: usize,
    pub decomposition: WaveletDecomposition,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}

/// `median(|finest details|) / 0.6745`.
pub fn estimate_sigma(d: &WaveletDecomposition) -> Result<f64> {
    let mut abs: Vec<f64> = d.finest_details().iter().map(|c| c.abs()).collect();
    if abs.is_empty() {
        return Err(Error::Empty("finest detail band"));
    }
    Ok(median(&mut abs) / MAD_NORMAL_CONSTANT)
}

/// `sigma * (0.3936 + 0.1829 * log2(n))` for `n > 32`, zero otherwise.
pub fn minimax_threshold(n: usize, sigma: f64) -> f64 {
    if n > 32 {
        sigma * (0.3936 + 0.1829 * (n as f64).log2())
    } else {
        0.0
    }
}

/// Hard-thresholds an existing decomposition; the approximation band is
/// always kept.
pub fn threshold_decomposition(d: &WaveletDecomposition) -> Result<ThresholdResult> {
    let sigma_hat = estimate_sigma(d)?;
    let peak = d.coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let threshold = minimax_threshold(d.original_length, sigma_hat).max(ROUNDOFF_FRACTION * peak);
    let approx = d.approximation_band();
    let support: Vec<bool> = d
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| approx.contains(&i) || c.abs() > threshold)
        .collect();
    let model = SparseWaveletModel::from_decomposition(d, support)?;
    let k_nonzero = model.popcount();
    Ok(ThresholdResult {
        model,
        threshold,
        sigma_hat,
        k_nonzero,
        decomposition: d.clone(),
    })
}

pub fn threshold_minimax(x: &TimeSeries, basis: &WaveletBasisSpec) -> Result<ThresholdResult> {
    threshold_decomposition(&dwt_max(x, basis)?)
}
