//! Genetic algorithms for the two optimization stages.
//!
//! The binary stage evolves fixed-cardinality bit masks (which wavelet
//! coefficients are active); the real stage evolves the values of the
//! active coefficients. Both share [`evolve`], a generational loop with
//! tournament-of-two parent selection, elitism and truncation of the
//! merged parent and offspring pool.


use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude below which a real gene counts as zeroed.
pub const ZERO_GENE: f64 = 1e-12;

/// Random stream type used throughout the optimizer.
pub type GaRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub stall_generations: usize,
    pub stall_tolerance: f64,
    /// Binary stage: swap probability per active gene. Real stage:
    /// probability that a child receives one Gaussian gene perturbation.
    pub mutation_rate: f64,
    pub elite_count: usize,
    pub rng_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self::binary()
    }
}

impl GaConfig {
    /// Defaults for the support-selection stage.
    pub fn binary() -> Self {
        Self {
            population_size: 100,
            max_generations: 500,
            stall_generations: 50,
            stall_tolerance: 1e-6,
            mutation_rate: 0.02,
            elite_count: 2,
            rng_seed: 0,
        }
    }

    /// Defaults for the coefficient-value stage.
    pub fn real() -> Self {
        Self {
            mutation_rate: 0.1,
            ..Self::binary()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::invalid(format!(
                "population_size must be at least 4, got {}",
                self.population_size
            )));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::invalid(format!(
                "elite_count {} must be below population_size {}",
                self.elite_count, self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::invalid(format!(
                "mutation_rate must be a probability, got {}",
                self.mutation_rate
            )));
        }
        if self.stall_tolerance.is_nan() || self.stall_tolerance < 0.0 {
            return Err(Error::invalid("stall_tolerance must be nonnegative"));
        }
        Ok(())
    }
}

/// Crossover and mutation for one genome type.
pub trait Variation<G>: Sync {
    fn crossover(&self, a: &G, b: &G, rng: &mut GaRng) -> G;
    fn mutate(&self, genome: G, rate: f64, rng: &mut GaRng) -> G;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scored<G> {
    pub genome: G,
    pub value: f64,
    /// Generation in which the individual was created.
    pub birth: usize,
}

#[derive(Debug, Clone)]
pub struct GaState<G> {
    /// Sorted best first.
    pub population: Vec<Scored<G>>,
    /// Generations completed.
    pub generation: usize,
    /// Best value of the initial population followed by the best after
    /// each generation.
    pub best_history: Vec<f64>,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct Evolution<G> {
    pub best: G,
    pub best_value: f64,
    pub state: GaState<G>,
}

/// Lower value first; among equal values the younger individual wins so
/// the population can drift across plateaus of a discrete objective.
fn rank<G>(a: &Scored<G>, b: &Scored<G>) -> std::cmp::Ordering {
    a.value.total_cmp(&b.value).then(b.birth.cmp(&a.birth))
}

fn tournament<'a, G>(pop: &'a [Scored<G>], rng: &mut GaRng) -> &'a Scored<G> {
    let a = &pop[rng.random_range(0..pop.len())];
    let b = &pop[rng.random_range(0..pop.len())];
    if rank(a, b).is_le() {
        a
    } else {
        b
    }
}

/// Mean relative change of the best value across the trailing window of
/// `window` generations, or `None` while the window is not yet full. The
/// initial population's value is never part of the window.
fn stall_measure(history: &[f64], window: usize) -> Option<f64> {
    let generations = history.len().saturating_sub(1);
    if window == 0 || generations < window + 1 {
        return None;
    }
    let tail = &history[history.len() - window - 1..];
    let total: f64 = tail
        .windows(2)
        .map(|w| {
            let diff = (w[0] - w[1]).abs();
            if diff == 0.0 {
                0.0
            } else {
                diff / w[0].abs().max(f64::MIN_POSITIVE)
            }
        })
        .sum();
    Some(total / window as f64)
}

/// Minimizes `objective` starting from `init`.
///
/// Each generation breeds `population_size` children. Every child owns an
/// rng stream seeded from the master stream, so evaluation order (and
/// parallelism) does not affect the result.
pub fn evolve<G, F, V>(objective: F, init: Vec<G>, variation: &V, cfg: &GaConfig) -> Result<Evolution<G>>
where
    G: Clone + Send + Sync,
    F: Fn(&G) -> f64 + Sync,
    V: Variation<G>,
{
    if init.is_empty() {
        return Err(Error::Empty("initial population"));
    }
    cfg.validate()?;
    if init.len() != cfg.population_size {
        return Err(Error::invalid(format!(
            "initial population has {} members, config expects {}",
            init.len(),
            cfg.population_size
        )));
    }

    let mut master = GaRng::seed_from_u64(cfg.rng_seed);
    let mut population: Vec<Scored<G>> = init
        .into_par_iter()
        .map(|genome| {
            let value = objective(&genome);
            Scored { genome, value, birth: 0 }
        })
        .collect();
    population.sort_by(rank);
    let mut evaluations = population.len();
    let mut best_history = vec![population[0].value];
    let mut generation = 0;

    while generation < cfg.max_generations {
        generation += 1;
        let seeds: Vec<u64> = (0..cfg.population_size).map(|_| master.next_u64()).collect();
        let parents = &population;
        let offspring: Vec<Scored<G>> = seeds
            .into_par_iter()
            .map(|seed| {
                let mut rng = GaRng::seed_from_u64(seed);
                let a = tournament(parents, &mut rng);
                let b = tournament(parents, &mut rng);
                let child = variation.crossover(&a.genome, &b.genome, &mut rng);
                let child = variation.mutate(child, cfg.mutation_rate, &mut rng);
                let value = objective(&child);
                Scored {
                    genome: child,
                    value,
                    birth: generation,
                }
            })
            .collect();
        evaluations += offspring.len();

        let mut next: Vec<Scored<G>> = Vec::with_capacity(cfg.population_size);
        let mut rest: Vec<Scored<G>> = Vec::with_capacity(2 * cfg.population_size);
        for (i, p) in std::mem::take(&mut population).into_iter().enumerate() {
            if i < cfg.elite_count {
                next.push(p);
            } else {
                rest.push(p);
            }
        }
        rest.extend(offspring);
        rest.sort_by(rank);
        rest.truncate(cfg.population_size - next.len());
        next.extend(rest);
        next.sort_by(rank);
        population = next;

        best_history.push(population[0].value);
        if let Some(change) = stall_measure(&best_history, cfg.stall_generations) {
            if change <= cfg.stall_tolerance {
                break;
            }
        }
    }

    let best = population[0].genome.clone();
    let best_value = population[0].value;
    Ok(Evolution {
        best,
        best_value,
        state: GaState {
            population,
            generation,
            best_history,
            evaluations,
        },
    })
}

/// Bit mask over coefficient indices with a fixed number of ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryChromosome {
    mask: Vec<bool>,
}

impl BinaryChromosome {
    pub fn new(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    /// Mask of length `n` with ones at `indices`.
    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut mask = vec![false; n];
        for &i in indices {
            mask[i] = true;
        }
        Self { mask }
    }

    /// Uniformly random `k`-subset of `0..n`.
    pub fn random(n: usize, k: usize, rng: &mut impl Rng) -> Self {
        let picked = rand::seq::index::sample(rng, n, k.min(n));
        Self::from_indices(n, &picked.into_vec())
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn into_mask(self) -> Vec<bool> {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn popcount(&self) -> usize {
        self.mask.iter().filter(|b| **b).count()
    }

    pub fn ones(&self) -> Vec<usize> {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Uniform crossover followed by a repair that restores the parents'
/// popcount by flipping loci where the parents disagree.
pub fn binary_crossover_uniform(a: &BinaryChromosome, b: &BinaryChromosome, rng: &mut impl Rng) -> BinaryChromosome {
    debug_assert_eq!(a.len(), b.len());
    let k = a.popcount();
    let mut mask = Vec::with_capacity(a.len());
    let mut ones_at_diff = Vec::new();
    let mut zeros_at_diff = Vec::new();
    for (i, (&x, &y)) in a.mask.iter().zip(&b.mask).enumerate() {
        let bit = if x == y { x } else { rng.random_bool(0.5) == x };
        if x != y {
            if bit {
                ones_at_diff.push(i);
            } else {
                zeros_at_diff.push(i);
            }
        }
        mask.push(bit);
    }
    let count = mask.iter().filter(|b| **b).count();
    if count > k {
        for j in rand::seq::index::sample(rng, ones_at_diff.len(), count - k) {
            mask[ones_at_diff[j]] = false;
        }
    } else if count < k {
        for j in rand::seq::index::sample(rng, zeros_at_diff.len(), k - count) {
            mask[zeros_at_diff[j]] = true;
        }
    }
    BinaryChromosome { mask }
}

/// Each active locus, with probability `rate`, trades places with a
/// uniformly chosen inactive locus. Popcount is preserved exactly.
pub fn binary_mutate(mut c: BinaryChromosome, rate: f64, rng: &mut impl Rng) -> BinaryChromosome {
    let n = c.len();
    if rate <= 0.0 || c.popcount() == n {
        return c;
    }
    for i in c.ones() {
        if rng.random_bool(rate) {
            // Rejection sampling; masks are sparse in practice.
            loop {
                let j = rng.random_range(0..n);
                if !c.mask[j] {
                    c.mask[j] = true;
                    c.mask[i] = false;
                    break;
                }
            }
        }
    }
    c
}

/// Popcount-preserving binary operators.
#[derive(Debug, Clone, Copy, Default)]
pub struct BinaryVariation;

impl Variation<BinaryChromosome> for BinaryVariation {
    fn crossover(&self, a: &BinaryChromosome, b: &BinaryChromosome, rng: &mut GaRng) -> BinaryChromosome {
        binary_crossover_uniform(a, b, rng)
    }

    fn mutate(&self, genome: BinaryChromosome, rate: f64, rng: &mut GaRng) -> BinaryChromosome {
        binary_mutate(genome, rate, rng)
    }
}

/// Values of the active coefficients, aligned with a fixed support.
#[derive(Debug, Clone, PartialEq)]
pub struct RealChromosome {
    pub values: Vec<f64>,
}

impl RealChromosome {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlendCrossoverConfig {
    pub alpha: f64,
}

impl Default for BlendCrossoverConfig {
    fn default() -> Self {
        Self { alpha: 0.25 }
    }
}

/// BLX-alpha: every child gene is drawn uniformly from the parents'
/// interval widened by `alpha * delta` on both sides.
pub fn real_crossover_blend(
    x: &RealChromosome,
    y: &RealChromosome,
    cfg: &BlendCrossoverConfig,
    rng: &mut impl Rng,
) -> RealChromosome {
    debug_assert_eq!(x.len(), y.len());
    let values = x
        .values
        .iter()
        .zip(&y.values)
        .map(|(&a, &b)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let delta = hi - lo;
            if delta == 0.0 {
                return a;
            }
            let (from, to) = (lo - cfg.alpha * delta, hi + cfg.alpha * delta);
            for _ in 0..16 {
                let v = rng.random_range(from..=to);
                if v.abs() >= ZERO_GENE {
                    return v;
                }
            }
            a
        })
        .collect();
    RealChromosome { values }
}

/// Perturbs one uniformly chosen gene by `N(0, sigma_mut^2)`, re-drawing
/// whenever the result would be (numerically) zero.
pub fn real_mutate(mut c: RealChromosome, sigma_mut: f64, rng: &mut impl Rng) -> RealChromosome {
    if sigma_mut <= 0.0 || c.is_empty() {
        return c;
    }
    let normal = Normal::new(0.0, sigma_mut).expect("positive finite sigma");
    let i = rng.random_range(0..c.len());
    let old = c.values[i];
    loop {
        let v = old + normal.sample(rng);
        if v.abs() >= ZERO_GENE {
            c.values[i] = v;
            break;
        }
    }
    c
}

#[derive(Debug, Clone, Copy)]
pub struct RealVariation {
    pub blend: BlendCrossoverConfig,
    pub sigma_mut: f64,
}

impl Variation<RealChromosome> for RealVariation {
    fn crossover(&self, a: &RealChromosome, b: &RealChromosome, rng: &mut GaRng) -> RealChromosome {
        real_crossover_blend(a, b, &self.blend, rng)
    }

    fn mutate(&self, genome: RealChromosome, rate: f64, rng: &mut GaRng) -> RealChromosome {
        if rng.random_bool(rate) {
            real_mutate(genome, self.sigma_mut, rng)
        } else {
            genome
        }
    }
}
