//! Oracles and fixtures shared by the integration tests.

#![allow(dead_code)]

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sum of squared run lengths, scanning a sign sequence left to right and
/// counting a new run at every sign change.
pub fn brute_force_runs(signs: &[i8]) -> u64 {
    let mut lengths = Vec::new();
    let mut i = 0;
    while i < signs.len() {
        let mut j = i;
        while j < signs.len() && signs[j] == signs[i] {
            j += 1;
        }
        lengths.push((j - i) as u64);
        i = j;
    }
    lengths.iter().map(|l| l * l).sum()
}

/// Random series with a mix of smooth and rough components.
pub fn random_series(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let f = rng.random_range(1.0..20.0);
    (0..n)
        .map(|i| (i as f64 * f / n as f64).sin() * 3.0 + rng.random_range(-1.0..1.0))
        .collect()
}

/// CDF of the symmetric stable law with characteristic function
/// `exp(-|t|^alpha)`, by Simpson quadrature of the Gil-Pelaez integral
/// `1/2 + 1/pi * int_0^inf sin(x t) exp(-t^alpha) / t dt`.
pub fn stable_cdf(x: f64, alpha: f64) -> f64 {
    let upper = 60.0f64;
    let steps = 120_000;
    let h = upper / steps as f64;
    let f = |t: f64| {
        if t == 0.0 {
            x
        } else {
            (x * t).sin() * (-t.powf(alpha)).exp() / t
        }
    };
    let mut sum = f(0.0) + f(upper);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(i as f64 * h);
    }
    0.5 + sum * h / 3.0 / std::f64::consts::PI
}

/// Quantile of [`stable_cdf`] by bisection.
pub fn stable_quantile(p: f64, alpha: f64) -> f64 {
    let (mut lo, mut hi) = (-50.0, 50.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if stable_cdf(mid, alpha) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sample-free Kolmogorov-Smirnov distance of `samples` to `cdf`.
pub fn ks_distance(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// Count-layout frequency file for `token` over 1800..=2008 with a smooth
/// trend and sampling noise.
pub fn synthetic_frequency_csv(token: &str, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("token,year,match_count,total_count\n");
    for year in 1800..=2008 {
        let t = (year - 1800) as f64 / 208.0;
        let total: u64 = 500_000 + rng.random_range(0..500_000);
        let p = 1e-5 * (1.0 + (8.0 * t).sin()) + 2e-5 * (-((t - 0.6) / 0.05).powi(2)).exp();
        let expected = p * total as f64;
        let count = (expected + rng.random_range(-2.0..2.0) * expected.sqrt()).max(0.0).round();
        let _ = writeln!(text, "{token},{year},{count},{total}");
    }
    text
}
