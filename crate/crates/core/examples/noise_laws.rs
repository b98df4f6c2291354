// The three noise models applied to the Bumps signal.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use runs_filter::datagen::{bumps, std_dev, BumpsSpec, NoiseModel};

pub fn run_example() -> runs_filter::Result<()> {
    let truth = bumps(&BumpsSpec::default())?;
    println!("bumps: {} samples, std {:.4}", truth.len(), std_dev(truth.samples()));
    for law in NoiseModel::reference_laws() {
        let sample = law.realize(&truth, &mut ChaCha8Rng::seed_from_u64(11))?;
        let noise: Vec<f64> = sample
            .noisy
            .samples()
            .iter()
            .zip(sample.truth.samples())
            .map(|(y, g)| y - g)
            .collect();
        let mut sorted = noise.clone();
        sorted.sort_by(f64::total_cmp);
        println!(
            "{:>8}: {law:?}\n          noise median {:+.3}, quartiles {:+.3} / {:+.3}, extremes {:+.1} / {:+.1}",
            law.name(),
            sorted[sorted.len() / 2],
            sorted[sorted.len() / 4],
            sorted[3 * sorted.len() / 4],
            sorted[0],
            sorted[sorted.len() - 1]
        );
    }
    Ok(())
}

fn main() -> runs_filter::Result<()> {
    run_example()
}
