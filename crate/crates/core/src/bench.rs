//! Head-to-head benchmark of the two filters on noisy Bumps series.
//!
//! Every trial draws one noisy realization, filters it with minimax
//! thresholding and with the runs criterion at the same coefficient budget,
//! and scores both against the noise-free reference by RMS deviation.

use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::datagen::{bumps, BumpsSpec, NoiseModel};
use crate::error::{Error, Result};
use crate::pipeline::{filter_baseline, filter_runs_criterion, FilterConfig, FilterFlag};
use crate::wavelet::TimeSeries;

/// Noise levels of the error-ratio sweep.
pub const SWEEP_SIGMAS: [f64; 6] = [0.5, 1.0, 2.0, 3.0, 4.0, 6.0];

/// Root-mean-square deviation between two equally long series.
pub fn rms(a: &TimeSeries, b: &TimeSeries) -> Result<f64> {
    rms_slices(a.samples(), b.samples())
}

pub fn rms_slices(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::Empty("rms input"));
    }
    let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((ss / a.len() as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub noise_kind: &'static str,
    /// Noise level for normal trials, `None` otherwise.
    pub sigma: Option<f64>,
    pub seed: u64,
    pub rms_baseline: f64,
    pub rms_runs: f64,
    pub k: usize,
    pub k_runs: usize,
    pub hard_r_baseline: f64,
    pub hard_r_runs: f64,
    #[serde(skip)]
    pub flags: Vec<FilterFlag>,
    pub wall_time: f64,
}

impl TrialResult {
    pub fn ratio(&self) -> f64 {
        self.rms_runs / self.rms_baseline
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawSummary {
    pub law: &'static str,
    pub trials: usize,
    pub mean_rms_baseline: f64,
    pub mean_rms_runs: f64,
    /// `mean_rms_runs / mean_rms_baseline`.
    pub ratio: f64,
    pub median_rms_baseline: f64,
    pub median_rms_runs: f64,
    pub mean_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub sigma: f64,
    pub trials: usize,
    /// Mean over trials of the per-trial error ratio.
    pub ratio: f64,
    pub ratio_of_means: f64,
    pub mean_rms_baseline: f64,
    pub mean_rms_runs: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BenchSummary {
    pub laws: Vec<LawSummary>,
    pub sweep: Vec<SweepPoint>,
    pub trials: Vec<TrialResult>,
}

/// Consecutive seeds starting at `base`.
pub fn trial_seeds(base: u64, trials: usize) -> Vec<u64> {
    (0..trials as u64).map(|i| base.wrapping_add(i)).collect()
}

fn law_salt(noise: &NoiseModel) -> u64 {
    match noise {
        NoiseModel::Normal { .. } => 0x6e6f_726d,
        NoiseModel::Poisson { .. } => 0x706f_6973,
        NoiseModel::Stable { .. } => 0x7374_6162,
    }
}

/// Filters one noisy realization with both methods.
pub fn run_trial(signal: &TimeSeries, noise: &NoiseModel, seed: u64, cfg: &FilterConfig) -> Result<TrialResult> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ law_salt(noise));
    let sample = noise.realize(signal, &mut rng)?;
    let cfg = cfg.clone().with_seed(seed);
    let baseline = filter_baseline(&sample.noisy, &cfg)?;
    let runs = filter_runs_criterion(&sample.noisy, &cfg)?;
    Ok(TrialResult {
        noise_kind: noise.name(),
        sigma: match noise {
            NoiseModel::Normal { sigma } => Some(*sigma),
            _ => None,
        },
        seed,
        rms_baseline: rms(&baseline.filtered, &sample.truth)?,
        rms_runs: rms(&runs.filtered, &sample.truth)?,
        k: baseline.k,
        k_runs: runs.k,
        hard_r_baseline: baseline.hard_r,
        hard_r_runs: runs.hard_r,
        flags: runs.flags,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn run_trials(signal: &TimeSeries, noise: &NoiseModel, seeds: &[u64], cfg: &FilterConfig) -> Result<Vec<TrialResult>> {
    seeds
        .par_iter()
        .map(|&seed| run_trial(signal, noise, seed, cfg))
        .collect()
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = v.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    sum / count as f64
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

pub fn summarize_law(trials: &[TrialResult]) -> LawSummary {
    let mean_rms_baseline = mean(trials.iter().map(|t| t.rms_baseline));
    let mean_rms_runs = mean(trials.iter().map(|t| t.rms_runs));
    LawSummary {
        law: trials.first().map_or("", |t| t.noise_kind),
        trials: trials.len(),
        mean_rms_baseline,
        mean_rms_runs,
        ratio: mean_rms_runs / mean_rms_baseline,
        median_rms_baseline: median(trials.iter().map(|t| t.rms_baseline).collect()),
        median_rms_runs: median(trials.iter().map(|t| t.rms_runs).collect()),
        mean_k: mean(trials.iter().map(|t| t.k as f64)),
    }
}

fn reference_signal() -> Result<TimeSeries> {
    bumps(&BumpsSpec::default())
}

/// The three-law RMS comparison; one trial per seed for each law.
pub fn run_table1(cfg: &FilterConfig, seeds: &[u64]) -> Result<BenchSummary> {
    run_table1_with(&reference_signal()?, &NoiseModel::reference_laws(), cfg, seeds)
}

pub fn run_table1_with(
    signal: &TimeSeries,
    laws: &[NoiseModel],
    cfg: &FilterConfig,
    seeds: &[u64],
) -> Result<BenchSummary> {
    if seeds.is_empty() {
        return Err(Error::invalid("at least one trial is required"));
    }
    let mut summary = BenchSummary::default();
    for law in laws {
        let trials = run_trials(signal, law, seeds, cfg)?;
        summary.laws.push(summarize_law(&trials));
        summary.trials.extend(trials);
    }
    Ok(summary)
}

/// Error ratio of the two filters across normal noise levels.
pub fn run_fig2_sweep(sigmas: &[f64], cfg: &FilterConfig, seeds: &[u64]) -> Result<BenchSummary> {
    if sigmas.is_empty() {
        return Err(Error::invalid("sweep needs at least one noise level"));
    }
    if sigmas.windows(2).any(|w| w[1] <= w[0]) || sigmas[0] <= 0.0 {
        return Err(Error::invalid("sweep noise levels must be positive and increasing"));
    }
    if seeds.is_empty() {
        return Err(Error::invalid("at least one trial is required"));
    }
    let signal = reference_signal()?;
    let mut summary = BenchSummary::default();
    for &sigma in sigmas {
        let trials = run_trials(&signal, &NoiseModel::Normal { sigma }, seeds, cfg)?;
        let law = summarize_law(&trials);
        summary.sweep.push(SweepPoint {
            sigma,
            trials: trials.len(),
            ratio: mean(trials.iter().map(TrialResult::ratio)),
            ratio_of_means: law.ratio,
            mean_rms_baseline: law.mean_rms_baseline,
            mean_rms_runs: law.mean_rms_runs,
        });
        summary.trials.extend(trials);
    }
    Ok(summary)
}

/// Table-1 acceptance: for every law the runs filter has lower mean RMS
/// and a ratio of at most `max_ratio`. Returns the violations.
pub fn check_table1(summary: &BenchSummary, max_ratio: f64) -> Vec<String> {
    summary
        .laws
        .iter()
        .filter(|l| !(l.mean_rms_runs < l.mean_rms_baseline && l.ratio <= max_ratio))
        .map(|l| {
            format!(
                "{}: runs {:.4} vs baseline {:.4} (ratio {:.3}, limit {max_ratio})",
                l.law, l.mean_rms_runs, l.mean_rms_baseline, l.ratio
            )
        })
        .collect()
}

/// Sweep acceptance: the ratio at the largest noise level exceeds the
/// minimum ratio of the grid, and no ratio reaches `max_ratio`.
pub fn check_sweep(summary: &BenchSummary, max_ratio: f64) -> Vec<String> {
    let mut problems = Vec::new();
    let Some(last) = summary.sweep.last() else {
        return vec!["empty sweep".into()];
    };
    let min = summary.sweep.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    if !(last.ratio > min) {
        problems.push(format!(
            "ratio at sigma {} ({:.3}) does not exceed the grid minimum {:.3}",
            last.sigma, last.ratio, min
        ));
    }
    for p in &summary.sweep {
        if !(p.ratio < max_ratio) {
            problems.push(format!("sigma {}: ratio {:.3} not below {max_ratio}", p.sigma, p.ratio));
        }
    }
    problems
}

pub fn write_laws_csv(summary: &BenchSummary, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for law in &summary.laws {
        w.serialize(law)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv(summary: &BenchSummary, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sigma", "ratio"])?;
    for p in &summary.sweep {
        w.write_record([format!("{}", p.sigma), format!("{:.16e}", p.ratio)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trials_csv(summary: &BenchSummary, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for t in &summary.trials {
        w.serialize(t)?;
    }
    w.flush()?;
    Ok(())
}

/// Plain-text table of a summary.
pub fn render_summary(summary: &BenchSummary) -> String {
    let mut s = String::new();
    if !summary.laws.is_empty() {
        let _ = writeln!(
            s,
            "{:<10} {:>6} {:>12} {:>12} {:>8} {:>12} {:>12} {:>8}",
            "law", "trials", "rms_thresh", "rms_runs", "ratio", "med_thresh", "med_runs", "mean_k"
        );
        for l in &summary.laws {
            let _ = writeln!(
                s,
                "{:<10} {:>6} {:>12.4} {:>12.4} {:>8.3} {:>12.4} {:>12.4} {:>8.1}",
                l.law,
                l.trials,
                l.mean_rms_baseline,
                l.mean_rms_runs,
                l.ratio,
                l.median_rms_baseline,
                l.median_rms_runs,
                l.mean_k
            );
        }
    }
    if !summary.sweep.is_empty() {
        let _ = writeln!(
            s,
            "{:>8} {:>6} {:>8} {:>12} {:>12}",
            "sigma", "trials", "ratio", "rms_thresh", "rms_runs"
        );
        for p in &summary.sweep {
            let _ = writeln!(
                s,
                "{:>8.2} {:>6} {:>8.3} {:>12.4} {:>12.4}",
                p.sigma, p.trials, p.ratio, p.mean_rms_baseline, p.mean_rms_runs
            );
        }
    }
    s
}
