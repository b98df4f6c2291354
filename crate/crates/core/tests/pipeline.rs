use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use runs_filter::datagen::{bumps, BumpsSpec, NoiseModel};
use runs_filter::ga::GaConfig;
use runs_filter::pipeline::{filter_baseline, filter_runs_criterion, FilterConfig, FilterFlag};
use runs_filter::wavelet::{dwt_max, reconstruct_sparse, SparseWaveletModel, TimeSeries, WaveletBasisSpec};
use runs_filter::Error;

fn quick_config(seed: u64) -> FilterConfig {
    let small = |base: GaConfig| GaConfig {
        population_size: 30,
        max_generations: 40,
        stall_generations: 10,
        ..base
    };
    FilterConfig {
        ga_binary: small(GaConfig::binary()),
        ga_real: small(GaConfig::real()),
        ..FilterConfig::default()
    }
    .with_seed(seed)
}

fn noisy_bumps(n: usize, sigma: f64, seed: u64) -> TimeSeries {
    let g = bumps(&BumpsSpec::with_len(n)).unwrap();
    NoiseModel::Normal { sigma }
        .realize(&g, &mut ChaCha8Rng::seed_from_u64(seed))
        .unwrap()
        .noisy
}

#[test]
fn exactly_sparse_input_is_a_degenerate_fit() {
    let n = 128;
    let basis = WaveletBasisSpec::sym3();
    let d = dwt_max(&TimeSeries::from_samples(vec![0.0; n]).unwrap(), &basis).unwrap();
    let mut support = vec![false; d.len()];
    for i in d.approximation_band() {
        support[i] = true;
    }
    let coarse = d.detail_bands()[1].start;
    support[coarse] = true;
    support[coarse + 1] = true;
    let k = support.iter().filter(|s| **s).count();
    let values = (0..k).map(|i| 3.0 + i as f64).collect();
    let model = SparseWaveletModel::new(support, values, basis, d.levels, n).unwrap();
    let x = reconstruct_sparse(&model).unwrap();

    let report = filter_runs_criterion(&x, &quick_config(1)).unwrap();
    assert!(report.has_flag(FilterFlag::DegeneratePerfectFit));
    assert_eq!(report.k, k);
    assert!(report.residual_norm < 1e-8);
    assert_eq!(report.hard_r, (n * n) as f64);
}

#[test]
fn budget_override_is_range_checked() {
    let x = noisy_bumps(64, 0.5, 1);
    for k in [0, 64 / 4 + 1] {
        let cfg = FilterConfig {
            k_override: Some(k),
            ..quick_config(1)
        };
        assert!(matches!(filter_runs_criterion(&x, &cfg), Err(Error::InvalidParameter(_))));
    }
    let cfg = FilterConfig {
        k_override: Some(64 / 4),
        ..quick_config(1)
    };
    assert_eq!(filter_runs_criterion(&x, &cfg).unwrap().k, 16);
}

#[test]
fn short_series_are_rejected() {
    let x = TimeSeries::from_samples(vec![1.0; 15]).unwrap();
    assert!(matches!(
        filter_runs_criterion(&x, &FilterConfig::default()),
        Err(Error::SeriesTooShort { len: 15, min: 16 })
    ));
    assert!(filter_baseline(&x, &FilterConfig::default()).is_err());
}

#[test]
fn both_filters_share_the_budget_and_synthesis() {
    for seed in 0..3 {
        let x = noisy_bumps(256, 0.3, seed);
        let cfg = quick_config(seed);
        let base = filter_baseline(&x, &cfg).unwrap();
        let runs = filter_runs_criterion(&x, &cfg).unwrap();
        assert_eq!(base.k, runs.k);
        assert!(runs.hard_r <= base.hard_r);
        for report in [&base, &runs] {
            assert_eq!(report.k, report.model.popcount());
            let y = reconstruct_sparse(&report.model).unwrap();
            for (a, b) in y.samples().iter().zip(report.filtered.samples()) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn runs_filter_is_deterministic() {
    let x = noisy_bumps(256, 0.3, 9);
    let a = filter_runs_criterion(&x, &quick_config(4)).unwrap();
    let b = filter_runs_criterion(&x, &quick_config(4)).unwrap();
    assert_eq!(a.filtered, b.filtered);
    assert_eq!(a.model, b.model);
    assert_eq!(a.generations_used, b.generations_used);
    let base_a = filter_baseline(&x, &quick_config(4)).unwrap();
    let base_b = filter_baseline(&x, &quick_config(4)).unwrap();
    assert_eq!(base_a.filtered, base_b.filtered);
}

#[test]
fn noise_free_constant_is_reproduced() {
    let x = TimeSeries::from_samples(vec![-2.25; 100]).unwrap();
    let base = filter_baseline(&x, &FilterConfig::default()).unwrap();
    for v in base.filtered.samples() {
        assert!((v + 2.25).abs() < 1e-9);
    }
    let runs = filter_runs_criterion(&x, &FilterConfig::default()).unwrap();
    assert!(runs.has_flag(FilterFlag::DegeneratePerfectFit));
}

#[test]
fn config_file_round_trip() {
    let cfg = FilterConfig {
        k_override: Some(12),
        outer_rounds: 3,
        soft_lambda: Some(0.5),
        ..FilterConfig::default().with_seed(77)
    };
    let back = FilterConfig::from_toml(&cfg.to_toml()).unwrap();
    assert_eq!(back.to_toml(), cfg.to_toml());

    let partial = FilterConfig::from_toml("outer_rounds = 1\n[ga_binary]\npopulation_size = 20\n").unwrap();
    assert_eq!(partial.outer_rounds, 1);
    assert_eq!(partial.ga_binary.population_size, 20);
    assert_eq!(partial.ga_binary.max_generations, GaConfig::binary().max_generations);
    assert_eq!(partial.ga_real, GaConfig::real());

    assert!(matches!(FilterConfig::from_toml("outer_round = 1"), Err(Error::Config(_))));
    assert!(FilterConfig::from_toml("[ga_real]\npopulation_size = 2\n").is_err());
}

#[test]
fn runs_statistic_improves_on_noisy_bumps() {
    let cfg = FilterConfig::default();
    let improved = (0..50u64)
        .filter(|&seed| {
            let x = noisy_bumps(1024, 2.0, 10_000 + seed);
            let base = filter_baseline(&x, &cfg).unwrap();
            let runs = filter_runs_criterion(&x, &cfg.clone().with_seed(seed)).unwrap();
            assert!(runs.hard_r <= base.hard_r);
            runs.hard_r < base.hard_r
        })
        .count();
    assert!(improved >= 45, "strict improvement in {improved} of 50 trials");
}
