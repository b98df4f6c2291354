// The genetic algorithm on its own: find a hidden set of 4 loci out of 32
// with popcount-preserving operators, then refine real values with blend
// crossover.

use rand::SeedableRng;
use runs_filter::ga::{
    evolve, BinaryChromosome, BinaryVariation, BlendCrossoverConfig, GaConfig, GaRng, RealChromosome, RealVariation,
};

pub fn run_example() -> runs_filter::Result<()> {
    let n = 32;
    let hidden = BinaryChromosome::from_indices(n, &[3, 11, 17, 29]);
    let cfg = GaConfig {
        population_size: 40,
        max_generations: 200,
        ..GaConfig::binary().with_seed(5)
    };
    let mut rng = GaRng::seed_from_u64(99);
    let init = (0..cfg.population_size)
        .map(|_| BinaryChromosome::random(n, 4, &mut rng))
        .collect();
    let misses = |c: &BinaryChromosome| c.mask().iter().zip(hidden.mask()).filter(|(a, b)| a != b).count() as f64;
    let found = evolve(misses, init, &BinaryVariation, &cfg)?;
    println!(
        "support search: best {:?} after {} generations, objective {}",
        found.best.ones(),
        found.state.generation,
        found.best_value
    );

    let target = [1.5, -2.0, 0.25, 4.0];
    let cfg = GaConfig {
        population_size: 40,
        max_generations: 300,
        ..GaConfig::real().with_seed(5)
    };
    let init = (0..cfg.population_size)
        .map(|i| RealChromosome::new(vec![1.0 + i as f64 * 0.05; 4]))
        .collect();
    let sq = |c: &RealChromosome| c.values.iter().zip(&target).map(|(v, t)| (v - t) * (v - t)).sum::<f64>();
    let variation = RealVariation {
        blend: BlendCrossoverConfig::default(),
        sigma_mut: 0.5,
    };
    let refined = evolve(sq, init, &variation, &cfg)?;
    println!(
        "value refinement: {:.3?} (squared error {:.2e}, {} evaluations)",
        refined.best.values, refined.best_value, refined.state.evaluations
    );
    Ok(())
}

fn main() -> runs_filter::Result<()> {
    run_example()
}
