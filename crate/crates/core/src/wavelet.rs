//! Periodized orthogonal discrete wavelet transform on the sym3 basis.
//!
//! Coefficients are stored flat, coarsest first: the approximation band of
//! the deepest level, then detail bands from the deepest level down to the
//! finest. Each analysis step works on a periodically extended signal; odd
//! lengths are padded by one sample (`x[m] = x[0]`) so that every level
//! splits an even-length block. For lengths divisible by `2^levels` the
//! coefficient count equals the series length and the transform is an
//! orthogonal change of basis.

use std::ops::Range;

use crate::error::{Error, Result};

/// Smallest series accepted anywhere in the crate.
pub const MIN_SERIES_LEN: usize = 8;

/// Low-pass reconstruction taps of the third-order symlet (identical to the
/// Daubechies-3 filter), normalized so that they sum to `sqrt(2)`.
///
/// Values from the closed form `(1 + sqrt(10) +/- sqrt(5 + 2 sqrt(10))) / 16`
/// family, scaled by `1/sqrt(2)`. Test code checks orthonormality and
/// vanishing moments before trusting them.
pub const SYM3_REC_LO: [f64; 6] = [
    0.332_670_552_950_082_6,
    0.806_891_509_311_092_6,
    0.459_877_502_118_491_6,
    -0.135_011_020_010_254_6,
    -0.085_441_273_882_026_66,
    0.035_226_291_885_709_54,
];

/// A uniformly sampled real-valued series.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    origin: i64,
}

impl TimeSeries {
    /// Builds a series, rejecting fewer than [`MIN_SERIES_LEN`] samples or
    /// any non-finite value.
    pub fn new(samples: Vec<f64>, origin: i64) -> Result<Self> {
        if samples.len() < MIN_SERIES_LEN {
            return Err(Error::SeriesTooShort {
                len: samples.len(),
                min: MIN_SERIES_LEN,
            });
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { samples, origin })
    }

    /// Series indexed from zero.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        Self::new(samples, 0)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn with_origin(mut self, origin: i64) -> Self {
        self.origin = origin;
        self
    }
}

/// Filter bank description for the transform.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletBasisSpec {
    pub family: &'static str,
    pub decomposition_filter: [f64; 6],
    pub reconstruction_filter: [f64; 6],
    /// Optional cap on the number of levels; `None` means the maximum
    /// feasible depth for the series length.
    pub max_levels: Option<usize>,
}

impl Default for WaveletBasisSpec {
    fn default() -> Self {
        Self::sym3()
    }
}

impl WaveletBasisSpec {
    pub fn sym3() -> Self {
        let mut dec = SYM3_REC_LO;
        dec.reverse();
        Self {
            family: "sym3",
            decomposition_filter: dec,
            reconstruction_filter: SYM3_REC_LO,
            max_levels: None,
        }
    }

    pub fn filter_len(&self) -> usize {
        self.reconstruction_filter.len()
    }

    /// Quadrature-mirror high-pass partner of the reconstruction low-pass.
    pub fn reconstruction_high_pass(&self) -> [f64; 6] {
        let lo = &self.reconstruction_filter;
        let l = lo.len();
        std::array::from_fn(|m| if m % 2 == 0 { lo[l - 1 - m] } else { -lo[l - 1 - m] })
    }

    /// Deepest decomposition admitted for a series of length `n`:
    /// `floor(log2(n / (L - 1)))`, but never less than one level once
    /// `n >= MIN_SERIES_LEN`.
    pub fn feasible_levels(&self, n: usize) -> usize {
        if n < MIN_SERIES_LEN {
            return 0;
        }
        let ratio = n as f64 / (self.filter_len() - 1) as f64;
        (ratio.log2().floor() as usize).max(1)
    }

    /// Levels actually used for length `n`: the feasible maximum, clipped
    /// by `max_levels` when set.
    pub fn levels_for(&self, n: usize) -> usize {
        let feasible = self.feasible_levels(n);
        match self.max_levels {
            Some(cap) => cap.clamp(1, feasible.max(1)),
            None => feasible,
        }
    }
}

/// Multilevel coefficients plus the bookkeeping needed to invert them.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition {
    pub coefficients: Vec<f64>,
    /// Approximation band first, then detail bands from coarsest to finest.
    pub level_bounds: Vec<Range<usize>>,
    pub levels: usize,
    pub boundary_mode: &'static str,
    pub original_length: usize,
    pub basis: WaveletBasisSpec,
}

/// Per-level block lengths: `lengths[j]` is the signal length entering
/// analysis level `j + 1`; the final entry is the approximation length.
pub(crate) fn level_lengths(n: usize, levels: usize) -> Vec<usize> {
    let mut lens = Vec::with_capacity(levels + 1);
    let mut m = n;
    lens.push(m);
    for _ in 0..levels {
        m = m.div_ceil(2);
        lens.push(m);
    }
    lens
}

/// Band layout for a series of length `n` decomposed `levels` times.
pub fn band_layout(n: usize, levels: usize) -> Vec<Range<usize>> {
    let lens = level_lengths(n, levels);
    let mut bounds = Vec::with_capacity(levels + 1);
    let approx = lens[levels];
    bounds.push(0..approx);
    let mut start = approx;
    for j in (1..=levels).rev() {
        let len = lens[j];
        bounds.push(start..start + len);
        start += len;
    }
    bounds
}

impl WaveletDecomposition {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn approximation_band(&self) -> Range<usize> {
        self.level_bounds[0].clone()
    }

    /// Detail band of the finest scale (level 1).
    pub fn finest_detail_band(&self) -> Range<usize> {
        self.level_bounds[self.levels].clone()
    }

    pub fn detail_bands(&self) -> &[Range<usize>] {
        &self.level_bounds[1..]
    }

    pub fn approximation(&self) -> &[f64] {
        &self.coefficients[self.approximation_band()]
    }

    pub fn finest_details(&self) -> &[f64] {
        &self.coefficients[self.finest_detail_band()]
    }

    /// Same layout with a different coefficient vector.
    pub fn with_coefficients(&self, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != self.coefficients.len() {
            return Err(Error::LengthMismatch {
                left: coefficients.len(),
                right: self.coefficients.len(),
            });
        }
        Ok(Self {
            coefficients,
            ..self.clone()
        })
    }

    fn validate(&self) -> Result<()> {
        let expected = band_layout(self.original_length, self.levels);
        if self.levels == 0 {
            return Err(Error::InconsistentDecomposition("zero levels".into()));
        }
        if expected != self.level_bounds {
            return Err(Error::InconsistentDecomposition(format!(
                "level bounds {:?} do not match layout {:?} for length {} at {} levels",
                self.level_bounds, expected, self.original_length, self.levels
            )));
        }
        let total = expected.last().map_or(0, |r| r.end);
        if total != self.coefficients.len() {
            return Err(Error::InconsistentDecomposition(format!(
                "{} coefficients, layout needs {}",
                self.coefficients.len(),
                total
            )));
        }
        Ok(())
    }
}

fn analysis_step(x: &[f64], lo: &[f64; 6], hi: &[f64; 6], approx: &mut [f64], detail: &mut [f64]) {
    let m = x.len();
    // Odd blocks see one periodic sample appended.
    let p = m + (m % 2);
    let at = |i: usize| {
        let j = i % p;
        if j == m {
            x[0]
        } else {
            x[j]
        }
    };
    for k in 0..p / 2 {
        let mut a = 0.0;
        let mut d = 0.0;
        for t in 0..lo.len() {
            let v = at(2 * k + t);
            a += lo[t] * v;
            d += hi[t] * v;
        }
        approx[k] = a;
        detail[k] = d;
    }
}

fn synthesis_step(approx: &[f64], detail: &[f64], lo: &[f64; 6], hi: &[f64; 6], out: &mut [f64]) {
    let m = out.len();
    let p = 2 * approx.len();
    debug_assert!(p == m + (m % 2));
    let mut buf = vec![0.0; p];
    for k in 0..approx.len() {
        let (a, d) = (approx[k], detail[k]);
        for t in 0..lo.len() {
            buf[(2 * k + t) % p] += lo[t] * a + hi[t] * d;
        }
    }
    out.copy_from_slice(&buf[..m]);
}

/// Forward multilevel transform.
pub fn dwt(x: &TimeSeries, basis: &WaveletBasisSpec, levels: usize) -> Result<WaveletDecomposition> {
    if let Some(i) = x.samples().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let n = x.len();
    let max = basis.feasible_levels(n);
    if levels == 0 || levels > max {
        return Err(Error::TooManyLevels {
            requested: levels,
            max,
            len: n,
        });
    }
    let lo = basis.reconstruction_filter;
    let hi = basis.reconstruction_high_pass();
    let bounds = band_layout(n, levels);
    let mut coefficients = vec![0.0; bounds.last().unwrap().end];

    let mut current = x.samples().to_vec();
    for j in 1..=levels {
        let half = current.len().div_ceil(2);
        let mut approx = vec![0.0; half];
        let detail_range = bounds[levels + 1 - j].clone();
        analysis_step(&current, &lo, &hi, &mut approx, &mut coefficients[detail_range]);
        current = approx;
    }
    coefficients[bounds[0].clone()].copy_from_slice(&current);

    Ok(WaveletDecomposition {
        coefficients,
        level_bounds: bounds,
        levels,
        boundary_mode: "periodized",
        original_length: n,
        basis: basis.clone(),
    })
}

/// Forward transform at the deepest level allowed by `basis`.
pub fn dwt_max(x: &TimeSeries, basis: &WaveletBasisSpec) -> Result<WaveletDecomposition> {
    dwt(x, basis, basis.levels_for(x.len()))
}

/// Inverse transform, returned as a series with origin zero.
pub fn idwt(d: &WaveletDecomposition) -> Result<TimeSeries> {
    d.validate()?;
    Ok(TimeSeries {
        samples: synthesize(d),
        origin: 0,
    })
}

fn synthesize(d: &WaveletDecomposition) -> Vec<f64> {
    let lo = d.basis.reconstruction_filter;
    let hi = d.basis.reconstruction_high_pass();
    let lens = level_lengths(d.original_length, d.levels);
    let mut current = d.coefficients[d.level_bounds[0].clone()].to_vec();
    for j in (1..=d.levels).rev() {
        let detail = &d.coefficients[d.level_bounds[d.levels + 1 - j].clone()];
        let mut out = vec![0.0; lens[j - 1]];
        synthesis_step(&current, detail, &lo, &hi, &mut out);
        current = out;
    }
    current
}

/// A wavelet series with only a subset of coefficients switched on.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseWaveletModel {
    pub support: Vec<bool>,
    /// Values at the `true` positions of `support`, in index order.
    pub values: Vec<f64>,
    pub basis: WaveletBasisSpec,
    pub levels: usize,
    pub original_length: usize,
}

impl SparseWaveletModel {
    pub fn new(
        support: Vec<bool>,
        values: Vec<f64>,
        basis: WaveletBasisSpec,
        levels: usize,
        original_length: usize,
    ) -> Result<Self> {
        let model = Self {
            support,
            values,
            basis,
            levels,
            original_length,
        };
        model.validate()?;
        Ok(model)
    }

    /// Keeps the coefficients of `d` at the given support.
    pub fn from_decomposition(d: &WaveletDecomposition, support: Vec<bool>) -> Result<Self> {
        if support.len() != d.len() {
            return Err(Error::LengthMismatch {
                left: support.len(),
                right: d.len(),
            });
        }
        let values = support
            .iter()
            .zip(&d.coefficients)
            .filter(|(s, _)| **s)
            .map(|(_, c)| *c)
            .collect();
        Self::new(support, values, d.basis.clone(), d.levels, d.original_length)
    }

    pub fn popcount(&self) -> usize {
        self.support.iter().filter(|s| **s).count()
    }

    /// Indices of active coefficients.
    pub fn indices(&self) -> Vec<usize> {
        self.support
            .iter()
            .enumerate()
            .filter(|(_, s)| **s)
            .map(|(i, _)| i)
            .collect()
    }

    /// `popcount <= original_length / 4`.
    pub fn is_sparse(&self) -> bool {
        self.popcount() <= self.original_length / 4
    }

    fn validate(&self) -> Result<()> {
        let support = self.popcount();
        if support != self.values.len() {
            return Err(Error::SupportMismatch {
                support,
                values: self.values.len(),
            });
        }
        let layout = band_layout(self.original_length, self.levels);
        let total = layout.last().map_or(0, |r| r.end);
        if total != self.support.len() {
            return Err(Error::InconsistentDecomposition(format!(
                "support mask has {} entries, layout needs {}",
                self.support.len(),
                total
            )));
        }
        Ok(())
    }

    /// Dense coefficient vector with zeros off the support.
    pub fn to_decomposition(&self) -> Result<WaveletDecomposition> {
        self.validate()?;
        let mut coefficients = vec![0.0; self.support.len()];
        for (i, v) in self.indices().into_iter().zip(&self.values) {
            coefficients[i] = *v;
        }
        Ok(WaveletDecomposition {
            coefficients,
            level_bounds: band_layout(self.original_length, self.levels),
            levels: self.levels,
            boundary_mode: "periodized",
            original_length: self.original_length,
            basis: self.basis.clone(),
        })
    }
}

/// Synthesizes the filtered series of a sparse model.
pub fn reconstruct_sparse(m: &SparseWaveletModel) -> Result<TimeSeries> {
    idwt(&m.to_decomposition()?)
}

/// One synthesis basis function stored on its circular support window.
#[derive(Debug, Clone)]
struct Atom {
    start: usize,
    values: Vec<f64>,
}

/// Precomputed synthesis functions `psi_i` for every coefficient of one
/// layout, used to evaluate many sparse models quickly.
#[derive(Debug, Clone)]
pub struct SynthesisBasis {
    atoms: Vec<Atom>,
    n: usize,
}

impl SynthesisBasis {
    pub fn new(basis: &WaveletBasisSpec, original_length: usize, levels: usize) -> Result<Self> {
        let bounds = band_layout(original_length, levels);
        let total = bounds.last().unwrap().end;
        let mut d = WaveletDecomposition {
            coefficients: vec![0.0; total],
            level_bounds: bounds,
            levels,
            boundary_mode: "periodized",
            original_length,
            basis: basis.clone(),
        };
        d.validate()?;
        let n = original_length;
        let mut atoms = Vec::with_capacity(total);
        for i in 0..total {
            d.coefficients[i] = 1.0;
            let column = synthesize(&d);
            d.coefficients[i] = 0.0;
            atoms.push(Self::compress(&column));
        }
        Ok(Self { atoms, n })
    }

    pub fn for_decomposition(d: &WaveletDecomposition) -> Result<Self> {
        Self::new(&d.basis, d.original_length, d.levels)
    }

    /// Shortest circular window holding every nonzero sample.
    fn compress(column: &[f64]) -> Atom {
        let n = column.len();
        let nz: Vec<usize> = (0..n).filter(|&i| column[i] != 0.0).collect();
        if nz.is_empty() {
            return Atom {
                start: 0,
                values: Vec::new(),
            };
        }
        // The window starts right after the widest circular gap of zeros.
        let mut best_gap = n - 1 - nz[nz.len() - 1] + nz[0];
        let mut start = nz[0];
        for w in nz.windows(2) {
            let gap = w[1] - w[0] - 1;
            if gap > best_gap {
                best_gap = gap;
                start = w[1];
            }
        }
        let len = n - best_gap;
        let values = (0..len).map(|j| column[(start + j) % n]).collect();
        Atom { start, values }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn series_len(&self) -> usize {
        self.n
    }

    /// `out += weight * psi_index`.
    pub fn accumulate(&self, index: usize, weight: f64, out: &mut [f64]) {
        let atom = &self.atoms[index];
        let n = self.n;
        let first = (n - atom.start).min(atom.values.len());
        for (o, v) in out[atom.start..atom.start + first].iter_mut().zip(&atom.values[..first]) {
            *o += weight * v;
        }
        for (o, v) in out.iter_mut().zip(&atom.values[first..]) {
            *o += weight * v;
        }
    }

    /// Writes `target - sum_k values[k] * psi_{indices[k]}` into `out`.
    pub fn residual_into(&self, target: &[f64], indices: &[usize], values: &[f64], out: &mut [f64]) {
        out.copy_from_slice(target);
        for (&i, &v) in indices.iter().zip(values) {
            self.accumulate(i, -v, out);
        }
    }

    /// Dense synthesis of a sparse coefficient set.
    pub fn synthesize(&self, indices: &[usize], values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (&i, &v) in indices.iter().zip(values) {
            self.accumulate(i, v, &mut out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_series(n: usize, seed: u64) -> Vec<f64> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect()
    }

    #[test]
    fn sym3_taps_are_orthonormal_with_three_vanishing_moments() {
        let b = WaveletBasisSpec::sym3();
        let lo = b.reconstruction_filter;
        let hi = b.reconstruction_high_pass();
        assert!((lo.iter().sum::<f64>() - 2f64.sqrt()).abs() < 1e-14);
        assert!((lo.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-14);
        for shift in [2usize, 4] {
            let dot: f64 = (0..6 - shift).map(|m| lo[m] * lo[m + shift]).sum();
            assert!(dot.abs() < 1e-14, "shift {shift}: {dot}");
        }
        for q in 0..3 {
            let moment: f64 = (0..6).map(|m| hi[m] * (m as f64).powi(q)).sum();
            assert!(moment.abs() < 1e-12, "moment {q}: {moment}");
        }
        let cubic: f64 = (0..6).map(|m| hi[m] * (m as f64).powi(3)).sum();
        assert!(cubic.abs() > 1e-3);
    }

    #[test]
    fn decomposition_filter_is_reversed_reconstruction() {
        let b = WaveletBasisSpec::sym3();
        let mut r = b.decomposition_filter;
        r.reverse();
        assert_eq!(r, b.reconstruction_filter);
    }

    #[test]
    fn feasible_levels_bound() {
        let b = WaveletBasisSpec::sym3();
        assert_eq!(b.feasible_levels(1024), 7);
        assert_eq!(b.feasible_levels(209), 5);
        assert_eq!(b.feasible_levels(16), 1);
        assert_eq!(b.feasible_levels(8), 1);
    }

    #[test]
    fn constant_series_has_zero_details() {
        let x = TimeSeries::from_samples(vec![5.0; 8]).unwrap();
        let d = dwt(&x, &WaveletBasisSpec::sym3(), 1).unwrap();
        for c in &d.coefficients[d.detail_bands()[0].clone()] {
            assert!(c.abs() < 1e-12);
        }
        for a in d.approximation() {
            assert!((a - 5.0 * 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_is_preserved() {
        let x = TimeSeries::from_samples(lcg_series(1024, 7)).unwrap();
        let d = dwt_max(&x, &WaveletBasisSpec::sym3()).unwrap();
        assert_eq!(d.len(), 1024);
        let ex: f64 = x.samples().iter().map(|v| v * v).sum::<f64>().sqrt();
        let ec: f64 = d.coefficients.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((ex - ec).abs() < 1e-10);
    }

    #[test]
    fn quadratic_details_vanish_away_from_wrap() {
        let b = WaveletBasisSpec::sym3();
        let t: Vec<f64> = (0..16).map(|i| (i * i) as f64).collect();
        let d = dwt(&TimeSeries::from_samples(t.clone()).unwrap(), &b, 1).unwrap();
        let detail = &d.coefficients[d.detail_bands()[0].clone()];
        let hi = b.reconstruction_high_pass();
        for (k, c) in detail.iter().enumerate() {
            // Direct correlation with the taps, no wrap-around.
            if 2 * k + 5 < 16 {
                let direct: f64 = (0..6).map(|m| hi[m] * t[2 * k + m]).sum();
                assert!(direct.abs() < 1e-9);
                assert!(c.abs() < 1e-9, "k={k} c={c}");
            } else {
                assert!(c.abs() > 1e-6, "wrap position {k} should see the discontinuity");
            }
        }
    }

    #[test]
    fn round_trip_and_zero_coefficients() {
        let b = WaveletBasisSpec::sym3();
        let x = TimeSeries::from_samples(lcg_series(256, 3)).unwrap();
        let d = dwt_max(&x, &b).unwrap();
        let y = idwt(&d).unwrap();
        for (a, c) in x.samples().iter().zip(y.samples()) {
            assert!((a - c).abs() < 1e-10);
        }
        let zero = idwt(&d.with_coefficients(vec![0.0; 256]).unwrap()).unwrap();
        assert!(zero.samples().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn odd_and_non_dyadic_lengths_round_trip() {
        let b = WaveletBasisSpec::sym3();
        for n in [8usize, 9, 13, 100, 209, 1068] {
            let x = TimeSeries::from_samples(lcg_series(n, n as u64)).unwrap();
            let d = dwt_max(&x, &b).unwrap();
            assert_eq!(d.level_bounds.last().unwrap().end, d.len());
            let y = idwt(&d).unwrap();
            assert_eq!(y.len(), n);
            let err = x
                .samples()
                .iter()
                .zip(y.samples())
                .map(|(a, c)| (a - c).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-10, "n={n} err={err}");
        }
    }

    #[test]
    fn unit_coefficient_gives_unit_norm_basis_function() {
        let b = WaveletBasisSpec::sym3();
        let n = 64;
        let levels = b.feasible_levels(n);
        let layout = band_layout(n, levels);
        let total = layout.last().unwrap().end;
        // Synthesis matrix assembled column by column.
        let mut columns = Vec::new();
        for k in 0..total {
            let mut c = vec![0.0; total];
            c[k] = 1.0;
            let d = WaveletDecomposition {
                coefficients: c,
                level_bounds: layout.clone(),
                levels,
                boundary_mode: "periodized",
                original_length: n,
                basis: b.clone(),
            };
            columns.push(idwt(&d).unwrap().into_samples());
        }
        for (i, ci) in columns.iter().enumerate() {
            let norm: f64 = ci.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-10);
            for cj in &columns[i + 1..] {
                let dot: f64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum();
                assert!(dot.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let b = WaveletBasisSpec::sym3();
        assert!(matches!(
            TimeSeries::from_samples(vec![1.0; 4]),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(matches!(
            TimeSeries::from_samples(vec![1.0, f64::NAN, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
            Err(Error::NonFinite(1))
        ));
        let x = TimeSeries::from_samples(vec![1.0; 64]).unwrap();
        assert!(matches!(dwt(&x, &b, 9), Err(Error::TooManyLevels { .. })));
        let mut d = dwt(&x, &b, 2).unwrap();
        d.level_bounds.swap(0, 1);
        assert!(matches!(idwt(&d), Err(Error::InconsistentDecomposition(_))));
    }

    #[test]
    fn sparse_reconstruction_is_linear() {
        let b = WaveletBasisSpec::sym3();
        let x = TimeSeries::from_samples(lcg_series(128, 11)).unwrap();
        let d = dwt_max(&x, &b).unwrap();
        let (ia, ib) = (5usize, 77usize);
        let (alpha, beta) = (1.7, -0.4);
        let single = |i: usize, v: f64| {
            let mut s = vec![false; d.len()];
            s[i] = true;
            reconstruct_sparse(&SparseWaveletModel::new(s, vec![v], b.clone(), d.levels, 128).unwrap())
                .unwrap()
                .into_samples()
        };
        let mut s = vec![false; d.len()];
        s[ia] = true;
        s[ib] = true;
        let pair = reconstruct_sparse(&SparseWaveletModel::new(s, vec![alpha, beta], b.clone(), d.levels, 128).unwrap())
            .unwrap();
        let (pa, pb) = (single(ia, 1.0), single(ib, 1.0));
        for t in 0..128 {
            assert!((pair.samples()[t] - (alpha * pa[t] + beta * pb[t])).abs() < 1e-12);
        }

        let empty = SparseWaveletModel::new(vec![false; d.len()], vec![], b.clone(), d.levels, 128).unwrap();
        assert!(reconstruct_sparse(&empty).unwrap().samples().iter().all(|v| *v == 0.0));

        let full = SparseWaveletModel::from_decomposition(&d, vec![true; d.len()]).unwrap();
        let back = reconstruct_sparse(&full).unwrap();
        for (a, c) in x.samples().iter().zip(back.samples()) {
            assert!((a - c).abs() < 1e-10);
        }

        assert!(matches!(
            SparseWaveletModel::new(vec![true, false], vec![1.0, 2.0], b, d.levels, 128),
            Err(Error::SupportMismatch { .. })
        ));
    }

    #[test]
    fn synthesis_cache_matches_idwt() {
        let b = WaveletBasisSpec::sym3();
        for n in [64usize, 209] {
            let x = TimeSeries::from_samples(lcg_series(n, 5)).unwrap();
            let d = dwt_max(&x, &b).unwrap();
            let cache = SynthesisBasis::for_decomposition(&d).unwrap();
            let support: Vec<bool> = (0..d.len()).map(|i| i % 3 == 0).collect();
            let model = SparseWaveletModel::from_decomposition(&d, support).unwrap();
            let slow = reconstruct_sparse(&model).unwrap();
            let fast = cache.synthesize(&model.indices(), &model.values);
            for (a, c) in slow.samples().iter().zip(&fast) {
                assert!((a - c).abs() < 1e-12);
            }
        }
    }
}
