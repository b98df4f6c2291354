// Filter yearly word frequencies from a CSV file, the way the `filter`
// command does. A synthetic file stands in for real corpus data.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use runs_filter::ingest::{run_cli, MethodChoice, RunSpec, YearRange};

fn synthetic_csv() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(1900);
    let mut text = String::from("token,year,match_count,total_count\n");
    for year in 1800..=2008 {
        let t = (year - 1800) as f64 / 208.0;
        let total = 1_000_000u64;
        // A word that takes off around 1900 and a short-lived fad.
        let rising = 2e-5 / (1.0 + (-(t - 0.5) * 25.0).exp());
        let fad = 1e-5 * (-((t - 0.7) / 0.03).powi(2)).exp();
        for (token, p) in [("telegraph", rising), ("hoopskirt", fad + 1e-7)] {
            let expected = p * total as f64;
            let count = (expected + rng.random_range(-1.0..1.0) * expected.sqrt()).max(0.0).round();
            let _ = writeln!(text, "{token},{year},{count},{total}");
        }
    }
    text
}

pub fn run_example() -> runs_filter::Result<()> {
    let dir = std::env::temp_dir().join(format!("runs-filter-ngram-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let input = dir.join("frequencies.csv");
    std::fs::write(&input, synthetic_csv())?;

    let spec = RunSpec {
        years: Some(YearRange::new(1800, 2008)?),
        method: MethodChoice::Both,
        seed: Some(42),
        plot: true,
        ..RunSpec::new(&input, dir.join("filtered.csv"))
    };
    let outcome = run_cli(&spec)?;
    for r in &outcome.results {
        let (b, f) = (r.baseline.as_ref().expect("baseline"), r.runs.as_ref().expect("runs"));
        println!(
            "{}: {} years, k {} / {}, hard R {} / {}",
            r.series.token,
            r.series.series.len(),
            b.k,
            f.k,
            b.hard_r,
            f.hard_r
        );
    }
    for path in &outcome.written {
        println!("wrote {}", path.display());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> runs_filter::Result<()> {
    run_example()
}
