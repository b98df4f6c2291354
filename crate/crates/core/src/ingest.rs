//! Word-frequency CSV ingestion and the batch filtering job behind the
//! `filter` command.
//!
//! Two input layouts are accepted, distinguished by their header:
//! `token,year,frequency` or `token,year,match_count,total_count`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{filter_baseline, filter_runs_criterion, FilterConfig, FilterReport, MIN_FILTER_LEN};
use crate::wavelet::TimeSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyRecord {
    pub token: String,
    pub year: i32,
    pub frequency: f64,
}

/// Inclusive year window, written `A:B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::invalid(format!("empty year window {start}:{end}")));
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }
}

impl FromStr for YearRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("year window must look like 1800:2008, got {s:?}"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        Self::new(start, end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Frequency,
    Counts,
}

fn parse_field<T: FromStr>(row: &csv::StringRecord, i: usize, line: u64, name: &str) -> Result<T> {
    let raw = row.get(i).unwrap_or("");
    raw.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {name} {raw:?}"),
    })
}

/// Reads frequency records in file order.
pub fn parse_frequency_csv(input: impl Read) -> Result<Vec<FrequencyRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
    let layout = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["token", "year", "frequency"] => Layout::Frequency,
        ["token", "year", "match_count", "total_count"] => Layout::Counts,
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "header must be token,year,frequency or token,year,match_count,total_count, got {}",
                    header.join(",")
                ),
            })
        }
    };
    let width = header.len();
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != width {
            return Err(Error::Parse {
                line,
                message: format!("expected {width} fields, found {}", row.len()),
            });
        }
        let token = row[0].to_string();
        if token.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty token".into(),
            });
        }
        let year: i32 = parse_field(&row, 1, line, "year")?;
        let frequency = match layout {
            Layout::Frequency => parse_field::<f64>(&row, 2, line, "frequency")?,
            Layout::Counts => {
                let matches: f64 = parse_field(&row, 2, line, "match_count")?;
                let total: f64 = parse_field(&row, 3, line, "total_count")?;
                if !(total > 0.0) {
                    return Err(Error::Parse {
                        line,
                        message: format!("total_count must be positive, got {total}"),
                    });
                }
                matches / total
            }
        };
        if !(frequency.is_finite() && frequency >= 0.0) {
            return Err(Error::Parse {
                line,
                message: format!("frequency must be finite and nonnegative, got {frequency}"),
            });
        }
        records.push(FrequencyRecord { token, year, frequency });
    }
    Ok(records)
}

/// One token's yearly series with gaps filled by zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenSeries {
    pub token: String,
    pub series: TimeSeries,
    pub filled_years: Vec<i32>,
}

impl TokenSeries {
    pub fn first_year(&self) -> i32 {
        self.series.origin() as i32
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.series.len() as i32).map(|i| self.first_year() + i)
    }
}

/// Assembles the series of `token` over `window`, or over the span of its
/// records when no window is given. `None` if the token has no records in
/// range.
pub fn collect_series(records: &[FrequencyRecord], token: &str, window: Option<YearRange>) -> Result<Option<TokenSeries>> {
    let mut by_year = BTreeMap::new();
    for r in records.iter().filter(|r| r.token == token) {
        if window.is_some_and(|w| !w.contains(r.year)) {
            continue;
        }
        if by_year.insert(r.year, r.frequency).is_some() {
            return Err(Error::invalid(format!("duplicate year {} for token {token:?}", r.year)));
        }
    }
    let (Some(&first), Some(&last)) = (by_year.keys().next(), by_year.keys().next_back()) else {
        return Ok(None);
    };
    let (start, end) = window.map_or((first, last), |w| (w.start, w.end));
    let mut samples = Vec::with_capacity((end - start + 1) as usize);
    let mut filled_years = Vec::new();
    for year in start..=end {
        match by_year.get(&year) {
            Some(&f) => samples.push(f),
            None => {
                samples.push(0.0);
                filled_years.push(year);
            }
        }
    }
    Ok(Some(TokenSeries {
        token: token.to_string(),
        series: TimeSeries::new(samples, start as i64)?,
        filled_years,
    }))
}

/// Distinct tokens in order of first appearance.
pub fn tokens_of(records: &[FrequencyRecord]) -> Vec<String> {
    let mut seen = Vec::<String>::new();
    for r in records {
        if !seen.iter().any(|t| *t == r.token) {
            seen.push(r.token.clone());
        }
    }
    seen
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Baseline,
    Runs,
    #[default]
    Both,
}

impl MethodChoice {
    fn baseline(self) -> bool {
        matches!(self, Self::Baseline | Self::Both)
    }

    fn runs(self) -> bool {
        matches!(self, Self::Runs | Self::Both)
    }
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Self::Baseline),
            "runs" => Ok(Self::Runs),
            "both" => Ok(Self::Both),
            _ => Err(Error::invalid(format!("method must be baseline, runs or both, got {s:?}"))),
        }
    }
}

/// A batch filtering job.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Tokens to filter; empty means every token in the input.
    pub tokens: Vec<String>,
    pub years: Option<YearRange>,
    pub method: MethodChoice,
    pub config: FilterConfig,
    /// Overrides the seeds in `config` when present.
    pub seed: Option<u64>,
    pub plot: bool,
}

impl RunSpec {
    pub fn new(input: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            output: output.into(),
            tokens: Vec::new(),
            years: None,
            method: MethodChoice::Both,
            config: FilterConfig::default(),
            seed: None,
            plot: false,
        }
    }

    pub fn summary_path(&self) -> PathBuf {
        self.output.with_extension("summary.csv")
    }

    pub fn plot_path(&self) -> PathBuf {
        self.output.with_extension("svg")
    }
}

#[derive(Debug, Clone)]
pub struct TokenResult {
    pub series: TokenSeries,
    pub baseline: Option<FilterReport>,
    pub runs: Option<FilterReport>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    pub results: Vec<TokenResult>,
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Filters the requested tokens of a frequency file and writes the results.
pub fn run_cli(spec: &RunSpec) -> Result<RunOutcome> {
    let records = parse_frequency_csv(File::open(&spec.input)?)?;
    let mut tokens = if spec.tokens.is_empty() {
        tokens_of(&records)
    } else {
        spec.tokens.clone()
    };
    tokens.sort();
    tokens.dedup();
    let cfg = match spec.seed {
        Some(seed) => spec.config.clone().with_seed(seed),
        None => spec.config.clone(),
    };

    let mut outcome = RunOutcome::default();
    for token in &tokens {
        let series = match collect_series(&records, token, spec.years) {
            Ok(Some(s)) if s.series.len() >= MIN_FILTER_LEN => s,
            Ok(Some(s)) => {
                outcome.warnings.push(short_warning(token, s.series.len()));
                continue;
            }
            Err(Error::SeriesTooShort { len, .. }) => {
                outcome.warnings.push(short_warning(token, len));
                continue;
            }
            Ok(None) => {
                outcome.warnings.push(format!("token {token:?}: no records in range, skipped"));
                continue;
            }
            Err(e) => return Err(e),
        };
        if !series.filled_years.is_empty() {
            outcome.warnings.push(format!(
                "token {token:?}: {} missing years filled with 0",
                series.filled_years.len()
            ));
        }
        let baseline = spec
            .method
            .baseline()
            .then(|| filter_baseline(&series.series, &cfg))
            .transpose()?;
        let runs = spec
            .method
            .runs()
            .then(|| filter_runs_criterion(&series.series, &cfg))
            .transpose()?;
        outcome.results.push(TokenResult { series, baseline, runs });
    }
    write_results(&outcome.results, spec.method, BufWriter::new(File::create(&spec.output)?))?;
    outcome.written.push(spec.output.clone());
    if spec.method == MethodChoice::Both {
        let path = spec.summary_path();
        write_summary(&outcome.results, BufWriter::new(File::create(&path)?))?;
        outcome.written.push(path);
    }
    if spec.plot {
        let path = spec.plot_path();
        std::fs::write(&path, render_svg(&outcome.results))?;
        outcome.written.push(path);
    }
    Ok(outcome)
}

fn short_warning(token: &str, len: usize) -> String {
    format!("token {token:?}: {len} years is shorter than the minimum of {MIN_FILTER_LEN}, skipped")
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Per-year output, ordered by token then year.
pub fn write_results(results: &[TokenResult], method: MethodChoice, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["token", "year", "raw"];
    if method.baseline() {
        header.push("filtered_baseline");
    }
    if method.runs() {
        header.push("filtered_runs");
    }
    w.write_record(&header)?;
    for r in results {
        for (i, year) in r.series.years().enumerate() {
            let mut row = vec![r.series.token.clone(), year.to_string(), float(r.series.series.samples()[i])];
            for report in [&r.baseline, &r.runs].into_iter().flatten() {
                row.push(float(report.filtered.samples()[i]));
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn flag_names(report: &FilterReport) -> String {
    report
        .flags
        .iter()
        .map(|f| format!("{f:?}"))
        .collect::<Vec<_>>()
        .join("|")
}

/// Coefficient count and runs statistics of each method and token.
pub fn write_summary(results: &[TokenResult], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["token", "method", "k", "hard_r", "soft_r", "filled_years", "flags"])?;
    for r in results {
        for (name, report) in [("baseline", &r.baseline), ("runs", &r.runs)] {
            if let Some(report) = report {
                w.write_record([
                    r.series.token.clone(),
                    name.to_string(),
                    report.k.to_string(),
                    report.hard_r.to_string(),
                    float(report.soft_r),
                    r.series.filled_years.len().to_string(),
                    flag_names(report),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// One panel per token: raw series in grey, filtered series in color.
pub fn render_svg(results: &[TokenResult]) -> String {
    const W: f64 = 720.0;
    const H: f64 = 200.0;
    const PAD: f64 = 24.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{}" font-family="sans-serif" font-size="12">"#,
        H * results.len() as f64
    );
    for (panel, r) in results.iter().enumerate() {
        let top = panel as f64 * H;
        let raw = r.series.series.samples();
        let mut all: Vec<f64> = raw.to_vec();
        for report in [&r.baseline, &r.runs].into_iter().flatten() {
            all.extend_from_slice(report.filtered.samples());
        }
        let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let n = raw.len().max(2) as f64;
        let points = |values: &[f64]| {
            values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let x = PAD + (W - 2.0 * PAD) * i as f64 / (n - 1.0);
                    let y = top + H - PAD - (H - 2.0 * PAD) * (v - lo) / span;
                    format!("{x:.2},{y:.2}")
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(
            svg,
            r#"<text x="{PAD}" y="{:.2}">{} ({}–{})</text>"#,
            top + PAD - 6.0,
            xml_escape(&r.series.token),
            r.series.first_year(),
            r.series.first_year() + raw.len() as i32 - 1
        );
        let _ = writeln!(svg, r##"<polyline fill="none" stroke="#bbbbbb" points="{}"/>"##, points(raw));
        for (report, color) in [(&r.baseline, "#1f77b4"), (&r.runs, "#d62728")] {
            if let Some(report) = report {
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    points(report.filtered.samples())
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Reads a filter configuration file.
pub fn load_config(path: &Path) -> Result<FilterConfig> {
    FilterConfig::from_toml(&std::fs::read_to_string(path)?)
}
