// Decompose a series with the periodized sym3 transform, check perfect
// reconstruction and energy preservation, then rebuild from a sparse
// subset of coefficients.

use runs_filter::wavelet::{dwt_max, idwt, reconstruct_sparse, SparseWaveletModel, TimeSeries, WaveletBasisSpec};

pub fn run_example() -> runs_filter::Result<()> {
    let n = 256;
    let samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            (6.0 * t).sin() + if (0.4..0.45).contains(&t) { 2.0 } else { 0.0 }
        })
        .collect();
    let x = TimeSeries::from_samples(samples)?;
    let basis = WaveletBasisSpec::sym3();
    let d = dwt_max(&x, &basis)?;
    println!("{} samples, {} levels, band layout {:?}", x.len(), d.levels, d.level_bounds);

    let back = idwt(&d)?;
    let max_err = x
        .samples()
        .iter()
        .zip(back.samples())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let energy_x: f64 = x.samples().iter().map(|v| v * v).sum();
    let energy_c: f64 = d.coefficients.iter().map(|v| v * v).sum();
    println!("max reconstruction error {max_err:.2e}, energy {energy_x:.6} vs {energy_c:.6}");
    assert!(max_err < 1e-10);

    // Keep the 24 largest coefficients.
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d.coefficients[b].abs().total_cmp(&d.coefficients[a].abs()));
    let mut support = vec![false; d.len()];
    for &i in &order[..24] {
        support[i] = true;
    }
    let model = SparseWaveletModel::from_decomposition(&d, support)?;
    let approx = reconstruct_sparse(&model)?;
    let rms = (x
        .samples()
        .iter()
        .zip(approx.samples())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n as f64)
        .sqrt();
    println!("{}-term approximation, sparse: {}, rms error {rms:.4}", model.popcount(), model.is_sparse());
    Ok(())
}

fn main() -> runs_filter::Result<()> {
    run_example()
}
