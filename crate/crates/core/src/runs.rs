//! Residual runs and the Ramachandran–Ranganathan statistic.
//!
//! A run is a maximal block of consecutive residuals sharing one sign. The
//! hard statistic is the sum of squared run lengths; the soft statistic
//! keeps the hard partition and replaces `sign(e)` inside every run by
//! `tanh(e / lambda)`.

use std::ops::Range;

use crate::error::{Error, Result};

/// Approximation errors `observed - model`, one per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSeries {
    errors: Vec<f64>,
}

impl ResidualSeries {
    pub fn new(errors: Vec<f64>) -> Result<Self> {
        if errors.is_empty() {
            return Err(Error::Empty("residual series"));
        }
        if let Some(i) = errors.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { errors })
    }

    /// `observed - model`, element-wise.
    pub fn between(observed: &[f64], model: &[f64]) -> Result<Self> {
        if observed.len() != model.len() {
            return Err(Error::LengthMismatch {
                left: observed.len(),
                right: model.len(),
            });
        }
        Self::new(observed.iter().zip(model).map(|(o, m)| o - m).collect())
    }

    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    /// +1 or -1.
    pub sign: i8,
    pub indices: Range<usize>,
}

impl Run {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunPartition {
    pub runs: Vec<Run>,
}

impl RunPartition {
    pub fn lengths(&self) -> Vec<usize> {
        self.runs.iter().map(Run::len).collect()
    }

    pub fn total_len(&self) -> usize {
        self.runs.last().map_or(0, |r| r.indices.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftRunsConfig {
    pub lambda: f64,
}

impl SoftRunsConfig {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("soft runs lambda must be positive, got {lambda}")));
        }
        Ok(Self { lambda })
    }
}

/// Sign of every residual after applying the zero rule: zeros inherit the
/// sign of the preceding sample, leading zeros take the sign of the first
/// nonzero residual, and an all-zero series is positive.
fn resolved_signs(e: &[f64]) -> impl Iterator<Item = i8> + '_ {
    let first = e
        .iter()
        .find(|v| **v != 0.0)
        .map_or(1, |v| if *v > 0.0 { 1 } else { -1 });
    e.iter().scan(first, |prev, v| {
        if *v > 0.0 {
            *prev = 1;
        } else if *v < 0.0 {
            *prev = -1;
        }
        Some(*prev)
    })
}

pub fn partition_runs(e: &ResidualSeries) -> RunPartition {
    let mut runs: Vec<Run> = Vec::new();
    for (t, s) in resolved_signs(&e.errors).enumerate() {
        match runs.last_mut() {
            Some(run) if run.sign == s => run.indices.end = t + 1,
            _ => runs.push(Run {
                sign: s,
                indices: t..t + 1,
            }),
        }
    }
    RunPartition { runs }
}

/// Sum of squared run lengths on a raw slice. Allocation-free; used by the
/// optimizer's inner loop.
pub fn hard_runs_of(e: &[f64]) -> u64 {
    let mut total = 0u64;
    let mut current = 0u64;
    let mut prev = 0i8;
    for s in resolved_signs(e) {
        if s == prev {
            current += 1;
        } else {
            total += current * current;
            current = 1;
            prev = s;
        }
    }
    total + current * current
}

/// `R = sum_i l_i^2`.
pub fn hard_runs_statistic(e: &ResidualSeries) -> f64 {
    hard_runs_of(&e.errors) as f64
}

/// Soft statistic on a raw slice, using the hard partition of `e`.
pub fn soft_runs_of(e: &[f64], lambda: f64) -> f64 {
    let inv = 1.0 / lambda;
    let mut total = 0.0;
    let mut inner = 0.0;
    let mut prev = 0i8;
    for (s, v) in resolved_signs(e).zip(e) {
        if s != prev {
            total += inner * inner;
            inner = 0.0;
            prev = s;
        }
        inner += (v * inv).tanh();
    }
    total + inner * inner
}

/// `R~ = sum_i (sum_{t in S_i} tanh(e_t / lambda))^2`.
pub fn soft_runs_statistic(e: &ResidualSeries, cfg: &SoftRunsConfig) -> f64 {
    soft_runs_of(&e.errors, cfg.lambda)
}
