// Both filters on one noisy Bumps series at the same coefficient budget.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use runs_filter::bench::rms;
use runs_filter::datagen::{bumps, BumpsSpec, NoiseModel};
use runs_filter::pipeline::{filter_baseline, filter_runs_criterion, FilterConfig};

pub fn run_example() -> runs_filter::Result<()> {
    let truth = bumps(&BumpsSpec::default())?;
    let sample = NoiseModel::Normal { sigma: 2.0 }.realize(&truth, &mut ChaCha8Rng::seed_from_u64(3))?;
    let cfg = FilterConfig::default().with_seed(3);

    let baseline = filter_baseline(&sample.noisy, &cfg)?;
    let runs = filter_runs_criterion(&sample.noisy, &cfg)?;
    for report in [&baseline, &runs] {
        println!(
            "{:?}: k {}, hard R {}, soft R {:.1}, rms vs truth {:.4}, flags {:?}",
            report.method,
            report.k,
            report.hard_r,
            report.soft_r,
            rms(&report.filtered, &sample.truth)?,
            report.flags
        );
    }
    println!("generations per round: {:?}", runs.generations_used);
    Ok(())
}

fn main() -> runs_filter::Result<()> {
    run_example()
}
