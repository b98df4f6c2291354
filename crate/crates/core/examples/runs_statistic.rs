// Split residuals into same-sign runs and evaluate the hard and soft runs
// statistics. Random residuals give many short runs; a systematic misfit
// gives few long ones and a much larger statistic.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use runs_filter::runs::{hard_runs_statistic, partition_runs, soft_runs_statistic, ResidualSeries, SoftRunsConfig};

pub fn run_example() -> runs_filter::Result<()> {
    let small = ResidualSeries::new(vec![0.5, 1.2, -0.3, -0.7, -0.1, 2.0])?;
    let parts = partition_runs(&small);
    println!("runs of {:?}: lengths {:?}", small.errors(), parts.lengths());
    println!("hard statistic {}", hard_runs_statistic(&small));

    let n = 1024;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let white: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
    let drift: Vec<f64> = white
        .iter()
        .enumerate()
        .map(|(i, e)| e + 3.0 * (i as f64 / 64.0).sin())
        .collect();
    let soft = SoftRunsConfig::new(1.0)?;
    for (name, e) in [("white noise", white), ("noise + misfit", drift)] {
        let e = ResidualSeries::new(e)?;
        println!(
            "{name:>15}: {} runs, hard {:>6}, soft {:>9.1}  (about 3n = {} expected for white noise)",
            partition_runs(&e).runs.len(),
            hard_runs_statistic(&e),
            soft_runs_statistic(&e, &soft),
            3 * n
        );
    }
    Ok(())
}

fn main() -> runs_filter::Result<()> {
    run_example()
}
