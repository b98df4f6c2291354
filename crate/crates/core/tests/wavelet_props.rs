mod common;

use proptest::prelude::*;
use runs_filter::wavelet::{dwt, dwt_max, idwt, reconstruct_sparse, SparseWaveletModel, TimeSeries, WaveletBasisSpec};

fn series(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, len)
}

proptest! {
    #[test]
    fn reconstruction_is_exact(x in series(8..300)) {
        let ts = TimeSeries::from_samples(x.clone()).unwrap();
        let d = dwt_max(&ts, &WaveletBasisSpec::sym3()).unwrap();
        let back = idwt(&d).unwrap();
        prop_assert_eq!(back.len(), x.len());
        for (a, b) in x.iter().zip(back.samples()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn energy_is_preserved_for_dyadic_lengths(x in prop::sample::select(vec![16usize, 32, 64, 128, 256])
        .prop_flat_map(|n| series(n..n + 1)))
    {
        let ts = TimeSeries::from_samples(x.clone()).unwrap();
        let d = dwt_max(&ts, &WaveletBasisSpec::sym3()).unwrap();
        let ex: f64 = x.iter().map(|v| v * v).sum();
        let ec: f64 = d.coefficients.iter().map(|v| v * v).sum();
        prop_assert!((ex - ec).abs() <= 1e-10 * ex.max(1e-300));
    }

    #[test]
    fn transform_is_linear(
        pair in (16usize..200).prop_flat_map(|n| (series(n..n + 1), series(n..n + 1))),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let (x, y) = pair;
        let basis = WaveletBasisSpec::sym3();
        let levels = basis.feasible_levels(x.len());
        let dx = dwt(&TimeSeries::from_samples(x.clone()).unwrap(), &basis, levels).unwrap();
        let dy = dwt(&TimeSeries::from_samples(y.clone()).unwrap(), &basis, levels).unwrap();
        let z: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let dz = dwt(&TimeSeries::from_samples(z).unwrap(), &basis, levels).unwrap();
        for ((cx, cy), cz) in dx.coefficients.iter().zip(&dy.coefficients).zip(&dz.coefficients) {
            prop_assert!((a * cx + b * cy - cz).abs() < 1e-9);
        }
    }

    #[test]
    fn sparse_synthesis_is_linear_in_values(
        x in series(64..65),
        keep in prop::collection::vec(any::<bool>(), 64),
        scale in -4.0f64..4.0,
    ) {
        let basis = WaveletBasisSpec::sym3();
        let d = dwt_max(&TimeSeries::from_samples(x).unwrap(), &basis).unwrap();
        let model = SparseWaveletModel::from_decomposition(&d, keep).unwrap();
        let scaled = SparseWaveletModel {
            values: model.values.iter().map(|v| v * scale).collect(),
            ..model.clone()
        };
        let y = reconstruct_sparse(&model).unwrap();
        let ys = reconstruct_sparse(&scaled).unwrap();
        for (p, q) in y.samples().iter().zip(ys.samples()) {
            prop_assert!((p * scale - q).abs() < 1e-9);
        }
    }
}
