// Mean RMS of both filters under normal, Poisson and stable noise.
//
// `cargo run --release --example table1 -- 50` runs the full 50 trials per
// law; the default is a quick two-trial pass.

use runs_filter::bench::{render_summary, run_table1, trial_seeds, write_laws_csv};
use runs_filter::pipeline::FilterConfig;

fn run(trials: usize) -> runs_filter::Result<()> {
    let summary = run_table1(&FilterConfig::default(), &trial_seeds(1, trials))?;
    print!("{}", render_summary(&summary));
    write_laws_csv(&summary, std::io::stdout())?;
    Ok(())
}

pub fn run_example() -> runs_filter::Result<()> {
    run(2)
}

fn main() -> runs_filter::Result<()> {
    match std::env::args().nth(1) {
        Some(t) => run(t.parse().map_err(|_| runs_filter::Error::InvalidParameter("trials must be an integer".into()))?),
        None => run_example(),
    }
}
