//! Command-line front end: filter frequency files, generate noisy test
//! signals and run the benchmarks.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use runs_filter::bench::{self, BenchSummary, SWEEP_SIGMAS};
use runs_filter::datagen::{bumps, BumpsSpec, NoiseModel};
use runs_filter::ingest::{load_config, run_cli, MethodChoice, RunSpec, YearRange};
use runs_filter::pipeline::FilterConfig;
use runs_filter::Error;

/// Largest acceptable runs/threshold RMS ratio per noise law.
const TABLE1_MAX_RATIO: f64 = 0.90;
/// Every sweep ratio must stay below this.
const SWEEP_MAX_RATIO: f64 = 1.05;

#[derive(Parser, Debug)]
#[command(version, about = "Sparse wavelet filtering by the runs criterion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Filter the yearly frequency series of a CSV file
    Filter {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Token to filter; repeat for several, omit for all
        #[arg(long = "token")]
        tokens: Vec<String>,
        /// Inclusive year window, e.g. 1800:2008
        #[arg(long, default_value = "1800:2008")]
        years: YearRange,
        /// baseline, runs or both
        #[arg(long, default_value = "both")]
        method: MethodChoice,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write an SVG plot next to the output
        #[arg(long)]
        plot: bool,
    },
    /// Write a noisy Bumps series as CSV (index,truth,noisy)
    Gen {
        #[arg(long)]
        output: PathBuf,
        /// normal, poisson or stable
        #[arg(long, default_value = "normal")]
        law: String,
        /// Standard deviation of normal noise
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare both filters on noisy Bumps series
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(clap::Args, Debug)]
struct BenchArgs {
    /// Summary CSV; per-trial rows go to <output>.trials.csv
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// First trial seed; trials use consecutive seeds
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit with status 3 when the acceptance ratios are violated
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand, Debug)]
enum BenchCommand {
    /// Mean RMS of both filters under normal, Poisson and stable noise
    Table1 {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[command(flatten)]
        common: BenchArgs,
    },
    /// Error ratio of the two filters across normal noise levels
    Sweep {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_values_t = SWEEP_SIGMAS)]
        sigmas: Vec<f64>,
        #[command(flatten)]
        common: BenchArgs,
    },
}

enum Failure {
    Usage(String),
    Data(String),
    Check(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

fn config_from(path: Option<&Path>) -> Result<FilterConfig, Failure> {
    match path {
        Some(p) => load_config(p).map_err(|e| match e {
            Error::Io(io) => Failure::Usage(format!("{}: {io}", p.display())),
            other => other.into(),
        }),
        None => Ok(FilterConfig::default()),
    }
}

fn law(name: &str, sigma: f64) -> Result<NoiseModel, Failure> {
    let [_, poisson, stable] = NoiseModel::reference_laws();
    match name {
        "normal" if sigma > 0.0 && sigma.is_finite() => Ok(NoiseModel::Normal { sigma }),
        "normal" => Err(Failure::Usage(format!("sigma must be positive, got {sigma}"))),
        "poisson" => Ok(poisson),
        "stable" => Ok(stable),
        _ => Err(Failure::Usage(format!("law must be normal, poisson or stable, got {name:?}"))),
    }
}

fn generate(output: &Path, law_name: &str, sigma: f64, n: usize, seed: u64) -> Result<(), Failure> {
    let noise = law(law_name, sigma)?;
    let signal = bumps(&BumpsSpec {
        n,
        ..BumpsSpec::default()
    })?;
    let sample = noise.realize(&signal, &mut ChaCha8Rng::seed_from_u64(seed))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(output).map_err(Error::from)?));
    let write = |w: &mut csv::Writer<_>| -> Result<(), csv::Error> {
        w.write_record(["index", "truth", "noisy"])?;
        for (i, (t, y)) in sample.truth.samples().iter().zip(sample.noisy.samples()).enumerate() {
            w.write_record([i.to_string(), format!("{t:.16e}"), format!("{y:.16e}")])?;
        }
        w.flush()?;
        Ok(())
    };
    write(&mut w).map_err(Error::from)?;
    Ok(())
}

fn finish_bench(summary: &BenchSummary, args: &BenchArgs, violations: Vec<String>) -> Result<(), Failure> {
    print!("{}", bench::render_summary(summary));
    if let Some(path) = &args.output {
        let file = BufWriter::new(File::create(path).map_err(Error::from)?);
        if summary.sweep.is_empty() {
            bench::write_laws_csv(summary, file)?;
        } else {
            bench::write_sweep_csv(summary, file)?;
        }
        let trials = BufWriter::new(File::create(path.with_extension("trials.csv")).map_err(Error::from)?);
        bench::write_trials_csv(summary, trials)?;
    }
    if args.check && !violations.is_empty() {
        return Err(Failure::Check(violations));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Filter {
            input,
            output,
            tokens,
            years,
            method,
            config,
            seed,
            plot,
        } => {
            let spec = RunSpec {
                input,
                output,
                tokens,
                years: Some(years),
                method,
                config: config_from(config.as_deref())?,
                seed,
                plot,
            };
            let outcome = run_cli(&spec)?;
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for path in &outcome.written {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Gen {
            output,
            law,
            sigma,
            n,
            seed,
        } => generate(&output, &law, sigma, n, seed),
        Command::Bench(BenchCommand::Table1 { trials, common }) => {
            if trials == 0 {
                return Err(Failure::Usage("trials must be at least 1".into()));
            }
            let cfg = config_from(common.config.as_deref())?;
            let summary = bench::run_table1(&cfg, &bench::trial_seeds(common.seed, trials))?;
            let violations = bench::check_table1(&summary, TABLE1_MAX_RATIO);
            finish_bench(&summary, &common, violations)
        }
        Command::Bench(BenchCommand::Sweep { trials, sigmas, common }) => {
            if trials == 0 {
                return Err(Failure::Usage("trials must be at least 1".into()));
            }
            let cfg = config_from(common.config.as_deref())?;
            let summary = bench::run_fig2_sweep(&sigmas, &cfg, &bench::trial_seeds(common.seed, trials))?;
            let violations = bench::check_sweep(&summary, SWEEP_MAX_RATIO);
            finish_bench(&summary, &common, violations)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(problems)) => {
            for p in problems {
                eprintln!("check failed: {p}");
            }
            ExitCode::from(3)
        }
    }
}
