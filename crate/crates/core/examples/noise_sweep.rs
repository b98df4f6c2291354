// Error ratio of the runs filter to minimax thresholding across normal
// noise levels.
//
// `cargo run --release --example noise_sweep -- 20` uses 20 trials per
// level; the default is one trial on a reduced grid.

use runs_filter::bench::{render_summary, run_fig2_sweep, trial_seeds, write_sweep_csv, SWEEP_SIGMAS};
use runs_filter::pipeline::FilterConfig;

fn run(sigmas: &[f64], trials: usize) -> runs_filter::Result<()> {
    let summary = run_fig2_sweep(sigmas, &FilterConfig::default(), &trial_seeds(1, trials))?;
    print!("{}", render_summary(&summary));
    write_sweep_csv(&summary, std::io::stdout())?;
    Ok(())
}

pub fn run_example() -> runs_filter::Result<()> {
    run(&[1.0, 4.0], 1)
}

fn main() -> runs_filter::Result<()> {
    match std::env::args().nth(1) {
        Some(t) => run(
            &SWEEP_SIGMAS,
            t.parse().map_err(|_| runs_filter::Error::InvalidParameter("trials must be an integer".into()))?,
        ),
        None => run_example(),
    }
}
