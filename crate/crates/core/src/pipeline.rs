//! The runs-criterion filter and the thresholding baseline behind one
//! report type.
//!
//! Filtering runs in rounds. Each round first searches for the support
//! (which `K` coefficients are active) with the binary GA, scoring a mask by
//! the hard runs statistic of the residual when the active coefficients
//! take their candidate values. It then tunes the values on the best mask
//! with the real-coded GA against the soft statistic. Refined values become
//! the candidate values of the next round.

use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::{
    evolve, BinaryChromosome, BinaryVariation, BlendCrossoverConfig, GaConfig, GaRng, RealChromosome, RealVariation,
    ZERO_GENE,
};
use crate::runs::{hard_runs_of, soft_runs_of, SoftRunsConfig};
use crate::threshold::{threshold_decomposition, ThresholdResult};
use crate::wavelet::{dwt_max, reconstruct_sparse, SparseWaveletModel, SynthesisBasis, TimeSeries, WaveletBasisSpec};

/// Smallest series the filters accept.
pub const MIN_FILTER_LEN: usize = 16;

/// Residuals within this fraction of the series' peak magnitude count as
/// exact zeros.
const RESIDUAL_ZERO_FRACTION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    #[serde(skip)]
    pub basis: WaveletBasisSpec,
    /// Cap on decomposition depth; absent means the deepest feasible.
    pub max_levels: Option<usize>,
    pub ga_binary: GaConfig,
    pub ga_real: GaConfig,
    pub blend: BlendCrossoverConfig,
    /// Scale of the soft statistic; absent means the estimated noise level.
    pub soft_lambda: Option<f64>,
    /// Gaussian mutation scale of the real stage as a multiple of the noise
    /// estimate.
    pub real_mutation_scale: f64,
    /// Jitter of the initial real population as a multiple of the noise
    /// estimate.
    pub real_init_jitter: f64,
    pub k_override: Option<usize>,
    /// Alternations of support search and value refinement.
    pub outer_rounds: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            basis: WaveletBasisSpec::sym3(),
            max_levels: None,
            ga_binary: GaConfig::binary(),
            ga_real: GaConfig::real(),
            blend: BlendCrossoverConfig::default(),
            soft_lambda: None,
            real_mutation_scale: 1.0,
            real_init_jitter: 1.0,
            k_override: None,
            outer_rounds: 2,
        }
    }
}

impl FilterConfig {
    /// Parses a TOML document; absent keys keep their defaults.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: FilterConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Sets the rng seed of both stages.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.ga_binary.rng_seed = seed;
        self.ga_real.rng_seed = seed ^ 0x9e37_79b9_7f4a_7c15;
        self
    }

    pub fn effective_basis(&self) -> WaveletBasisSpec {
        WaveletBasisSpec {
            max_levels: self.max_levels.or(self.basis.max_levels),
            ..self.basis.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ga_binary.validate()?;
        self.ga_real.validate()?;
        if !(self.blend.alpha >= 0.0) {
            return Err(Error::invalid("blend alpha must be nonnegative"));
        }
        if let Some(l) = self.soft_lambda {
            SoftRunsConfig::new(l)?;
        }
        if !(self.real_mutation_scale >= 0.0 && self.real_init_jitter >= 0.0) {
            return Err(Error::invalid("real-stage scales must be nonnegative"));
        }
        if self.outer_rounds == 0 {
            return Err(Error::invalid("outer_rounds must be at least 1"));
        }
        if matches!(self.max_levels, Some(0)) {
            return Err(Error::invalid("max_levels must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Baseline,
    RunsCriterion,
}

/// Why the runs filter returned something other than its own optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterFlag {
    /// Residuals vanish; the runs statistic is uninformative.
    DegeneratePerfectFit,
    /// The optimizer did not beat the baseline; the baseline is returned.
    BaselineFallback,
    /// The baseline budget exceeds a quarter of the series; no search done.
    BudgetNotSparse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StageGenerations {
    pub binary: usize,
    pub real: usize,
}

#[derive(Debug, Clone)]
pub struct FilterReport {
    pub method: Method,
    pub filtered: TimeSeries,
    pub model: SparseWaveletModel,
    pub k: usize,
    pub hard_r: f64,
    pub soft_r: f64,
    /// Scale used for `soft_r`.
    pub lambda: f64,
    pub residual_norm: f64,
    pub baseline: ThresholdResult,
    pub generations_used: Vec<StageGenerations>,
    pub flags: Vec<FilterFlag>,
}

impl FilterReport {
    pub fn has_flag(&self, flag: FilterFlag) -> bool {
        self.flags.contains(&flag)
    }
}

fn check_series(x: &TimeSeries) -> Result<()> {
    if x.len() < MIN_FILTER_LEN {
        return Err(Error::SeriesTooShort {
            len: x.len(),
            min: MIN_FILTER_LEN,
        });
    }
    Ok(())
}

/// Residual evaluation shared by both stages.
struct Scorer<'a> {
    target: &'a [f64],
    atoms: &'a SynthesisBasis,
    zero_tol: f64,
    lambda: f64,
}

impl Scorer<'_> {
    fn residual(&self, indices: &[usize], values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.target.len()];
        self.atoms.residual_into(self.target, indices, values, &mut out);
        for v in &mut out {
            if v.abs() <= self.zero_tol {
                *v = 0.0;
            }
        }
        out
    }

    fn hard(&self, indices: &[usize], values: &[f64]) -> f64 {
        hard_runs_of(&self.residual(indices, values)) as f64
    }

    fn soft(&self, indices: &[usize], values: &[f64]) -> f64 {
        soft_runs_of(&self.residual(indices, values), self.lambda)
    }

    fn is_perfect(&self, indices: &[usize], values: &[f64]) -> bool {
        self.residual(indices, values).iter().all(|v| *v == 0.0)
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn report(
    method: Method,
    x: &TimeSeries,
    model: SparseWaveletModel,
    baseline: ThresholdResult,
    lambda: f64,
    generations_used: Vec<StageGenerations>,
    flags: Vec<FilterFlag>,
) -> Result<FilterReport> {
    let filtered = reconstruct_sparse(&model)?.with_origin(x.origin());
    let peak = x.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let zero_tol = RESIDUAL_ZERO_FRACTION * peak.max(1.0);
    let residual: Vec<f64> = x
        .samples()
        .iter()
        .zip(filtered.samples())
        .map(|(a, b)| {
            let e = a - b;
            if e.abs() <= zero_tol {
                0.0
            } else {
                e
            }
        })
        .collect();
    Ok(FilterReport {
        method,
        k: model.popcount(),
        hard_r: hard_runs_of(&residual) as f64,
        soft_r: soft_runs_of(&residual, lambda),
        lambda,
        residual_norm: norm(&residual),
        filtered,
        model,
        baseline,
        generations_used,
        flags,
    })
}

fn soft_lambda(cfg: &FilterConfig, baseline: &ThresholdResult, x: &TimeSeries) -> f64 {
    if let Some(l) = cfg.soft_lambda {
        return l;
    }
    if baseline.sigma_hat > 0.0 {
        baseline.sigma_hat
    } else {
        // Noise-free input: any small positive scale keeps tanh well defined.
        let peak = x.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (1e-6 * peak).max(f64::MIN_POSITIVE)
    }
}

/// Minimax thresholding wrapped in the common report.
pub fn filter_baseline(x: &TimeSeries, cfg: &FilterConfig) -> Result<FilterReport> {
    check_series(x)?;
    cfg.validate()?;
    let baseline = threshold_decomposition(&dwt_max(x, &cfg.effective_basis())?)?;
    let lambda = soft_lambda(cfg, &baseline, x);
    report(Method::Baseline, x, baseline.model.clone(), baseline, lambda, Vec::new(), Vec::new())
}

/// Largest-magnitude `k` coefficients, approximation band first.
fn top_k_support(baseline: &ThresholdResult, k: usize) -> Vec<usize> {
    let d = &baseline.decomposition;
    let approx = d.approximation_band();
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| {
        approx
            .contains(&b)
            .cmp(&approx.contains(&a))
            .then(d.coefficients[b].abs().total_cmp(&d.coefficients[a].abs()))
            .then(a.cmp(&b))
    });
    order.truncate(k);
    order.sort_unstable();
    order
}

/// Sparse filter whose residuals minimize the runs statistic at the
/// baseline's coefficient budget.
pub fn filter_runs_criterion(x: &TimeSeries, cfg: &FilterConfig) -> Result<FilterReport> {
    check_series(x)?;
    cfg.validate()?;
    let n = x.len();
    let decomposition = dwt_max(x, &cfg.effective_basis())?;
    let baseline = threshold_decomposition(&decomposition)?;
    let lambda = soft_lambda(cfg, &baseline, x);

    let k = match cfg.k_override {
        Some(k) if k == 0 || k > n / 4 => {
            return Err(Error::invalid(format!("k_override {k} outside [1, {}]", n / 4)));
        }
        Some(k) => k,
        None => baseline.k_nonzero,
    };

    let atoms = SynthesisBasis::for_decomposition(&decomposition)?;
    let peak = x.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scorer = Scorer {
        target: x.samples(),
        atoms: &atoms,
        zero_tol: RESIDUAL_ZERO_FRACTION * peak.max(1.0),
        lambda,
    };

    let baseline_indices = baseline.model.indices();
    let baseline_values = baseline.model.values.clone();
    let baseline_hard = scorer.hard(&baseline_indices, &baseline_values);
    let fallback = |flag: FilterFlag| {
        report(
            Method::RunsCriterion,
            x,
            baseline.model.clone(),
            baseline.clone(),
            lambda,
            Vec::new(),
            vec![flag],
        )
    };

    if k == baseline.k_nonzero && scorer.is_perfect(&baseline_indices, &baseline_values) {
        return fallback(FilterFlag::DegeneratePerfectFit);
    }
    if cfg.k_override.is_none() && k > n / 4 {
        return fallback(FilterFlag::BudgetNotSparse);
    }

    let total = decomposition.len();
    let mut candidate = decomposition.coefficients.clone();
    let mut best_indices = if k == baseline.k_nonzero {
        baseline_indices.clone()
    } else {
        top_k_support(&baseline, k)
    };
    let mut best_values: Vec<f64> = best_indices.iter().map(|&i| candidate[i]).collect();
    let mut best_hard = scorer.hard(&best_indices, &best_values);
    let mut generations_used = Vec::with_capacity(cfg.outer_rounds);
    let variation_bin = BinaryVariation;
    let mut perfect = false;

    for round in 0..cfg.outer_rounds {
        let round_salt = (round as u64).wrapping_mul(0xd1b5_4a32_d192_ed03);

        // Support search with the current candidate values.
        let bin_cfg = cfg.ga_binary.clone().with_seed(cfg.ga_binary.rng_seed ^ round_salt);
        let mut init_rng = GaRng::seed_from_u64(bin_cfg.rng_seed.wrapping_add(1));
        let mut init = Vec::with_capacity(bin_cfg.population_size);
        init.push(BinaryChromosome::from_indices(total, &best_indices));
        while init.len() < bin_cfg.population_size {
            init.push(BinaryChromosome::random(total, k, &mut init_rng));
        }
        let cand = &candidate;
        let binary = evolve(
            |c: &BinaryChromosome| {
                let idx = c.ones();
                let vals: Vec<f64> = idx.iter().map(|&i| cand[i]).collect();
                scorer.hard(&idx, &vals)
            },
            init,
            &variation_bin,
            &bin_cfg,
        )?;
        let support = binary.best.ones();
        let support_values: Vec<f64> = support.iter().map(|&i| candidate[i]).collect();
        if binary.best_value <= best_hard {
            best_hard = binary.best_value;
            best_indices = support.clone();
            best_values = support_values.clone();
        }

        // Value refinement on the selected support.
        let real_cfg = cfg.ga_real.clone().with_seed(cfg.ga_real.rng_seed ^ round_salt);
        let sigma = baseline.sigma_hat;
        let mut init_rng = GaRng::seed_from_u64(real_cfg.rng_seed.wrapping_add(1));
        let seed_values: Vec<f64> = support_values
            .iter()
            .map(|v| if v.abs() < ZERO_GENE { ZERO_GENE.copysign(*v) } else { *v })
            .collect();
        let mut init = Vec::with_capacity(real_cfg.population_size);
        init.push(RealChromosome::new(seed_values.clone()));
        let jitter = cfg.real_init_jitter * sigma;
        while init.len() < real_cfg.population_size {
            init.push(RealChromosome::new(jittered(&seed_values, jitter, &mut init_rng)));
        }
        let variation = RealVariation {
            blend: cfg.blend,
            sigma_mut: cfg.real_mutation_scale * sigma,
        };
        let sup = &support;
        let real = evolve(|c: &RealChromosome| scorer.soft(sup, &c.values), init, &variation, &real_cfg)?;
        generations_used.push(StageGenerations {
            binary: binary.state.generation,
            real: real.state.generation,
        });

        let refined = real.best.values;
        if scorer.is_perfect(&support, &refined) {
            best_indices = support;
            best_values = refined;
            perfect = true;
            break;
        }
        let refined_hard = scorer.hard(&support, &refined);
        if refined_hard <= best_hard {
            best_hard = refined_hard;
            best_indices = support.clone();
            best_values = refined.clone();
        }
        for (&i, v) in support.iter().zip(&refined) {
            candidate[i] = *v;
        }
    }

    if !perfect && best_hard > baseline_hard {
        return fallback(FilterFlag::BaselineFallback);
    }
    let mut mask = vec![false; total];
    for &i in &best_indices {
        mask[i] = true;
    }
    let model = SparseWaveletModel::new(
        mask,
        best_values,
        decomposition.basis.clone(),
        decomposition.levels,
        decomposition.original_length,
    )?;
    let flags = if perfect {
        vec![FilterFlag::DegeneratePerfectFit]
    } else {
        Vec::new()
    };
    report(Method::RunsCriterion, x, model, baseline, lambda, generations_used, flags)
}

fn jittered(values: &[f64], scale: f64, rng: &mut impl Rng) -> Vec<f64> {
    if scale <= 0.0 {
        return values.to_vec();
    }
    let normal = Normal::new(0.0, scale).expect("positive jitter");
    values
        .iter()
        .map(|v| loop {
            let w = v + normal.sample(rng);
            if w.abs() >= ZERO_GENE {
                break w;
            }
        })
        .collect()
}
