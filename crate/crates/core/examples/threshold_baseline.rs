// Minimax hard thresholding of a noisy Bumps series.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use runs_filter::bench::rms;
use runs_filter::datagen::{add_normal_noise, bumps, BumpsSpec};
use runs_filter::threshold::threshold_minimax;
use runs_filter::wavelet::{reconstruct_sparse, WaveletBasisSpec};

pub fn run_example() -> runs_filter::Result<()> {
    let truth = bumps(&BumpsSpec::default())?;
    let noisy = add_normal_noise(&truth, 2.0, &mut ChaCha8Rng::seed_from_u64(1))?;
    let result = threshold_minimax(&noisy, &WaveletBasisSpec::sym3())?;
    let filtered = reconstruct_sparse(&result.model)?;
    println!(
        "noise estimate {:.3}, threshold {:.3}, kept {} of {} coefficients ({:.1}%)",
        result.sigma_hat,
        result.threshold,
        result.k_nonzero,
        result.decomposition.len(),
        100.0 * result.k_nonzero as f64 / result.decomposition.len() as f64
    );
    println!("rms noisy {:.4}, rms filtered {:.4}", rms(&noisy, &truth)?, rms(&filtered, &truth)?);
    Ok(())
}

fn main() -> runs_filter::Result<()> {
    run_example()
}
