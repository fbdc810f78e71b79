//! Exact joint Gaussian sampling of the random series at finite point sets.
//!
//! At points `x_1, …, x_m` the vector `(f^ω(x_i))_i` is centered Gaussian with
//! covariance `C_ij = Σ_n c(n)² e_{d,n}(x_i, x_j) / dim E_n`, so it is drawn as
//! `L g` with `L` a (jittered) Cholesky factor of `C`. Draw `k` of seed `s`
//! uses the ChaCha8 stream `k` keyed by `s`, which makes every draw
//! independent of evaluation order.

use alloc::vec::Vec;

use nalgebra::{Cholesky, Dyn};
pub use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::conditions::{Tails, WeightSequence};
use crate::dudley::CoefficientSequence;
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{hat_coords, hat_coords_general, SpherePair};
use crate::quad::NeumaierSum;
use crate::special_fn::eigenspace_dim_f64;
use crate::spectral::spectral_levels;

/// Checks dimensions, finiteness and distinctness of a point set.
pub fn check_points(d: u32, points: &[Vec<f64>]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if p.len() != d as usize {
            return Err(Error::DimensionMismatch {
                left: p.len(),
                right: d as usize,
            });
        }
        for v in p {
            ensure_finite(*v, "point")?;
        }
        if let Some(j) = points[..i].iter().position(|q| q == p) {
            return Err(Error::DuplicatePoints { first: j, second: i });
        }
    }
    Ok(())
}

fn level_weights(d: u32, coeffs: &CoefficientSequence, n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .map(|n| {
            let c = coeffs.value(n as u64);
            c * c / eigenspace_dim_f64(d, n)
        })
        .collect()
}

fn weighted_levels(levels: &[f64], weights: &[f64]) -> f64 {
    let s: NeumaierSum = levels.iter().zip(weights).map(|(e, w)| e * w).collect();
    s.total()
}

/// `Σ_{n ≤ n_max} c(n)² e_{d,n}(x, y) / dim E_n`.
pub fn covariance_entry(d: u32, coeffs: &CoefficientSequence, x: &[f64], y: &[f64], n_max: usize) -> Result<f64> {
    let levels = spectral_levels(d, n_max, hat_coords_general(x, y)?)?;
    Ok(weighted_levels(&levels, &level_weights(d, coeffs, n_max)))
}

/// Covariance matrix of the truncated series at distinct points of `ℝ^d`.
pub fn field_covariance(
    d: u32,
    coeffs: &CoefficientSequence,
    points: &[Vec<f64>],
    n_max: usize,
) -> Result<DMatrix<f64>> {
    check_points(d, points)?;
    let weights = level_weights(d, coeffs, n_max);
    let m = points.len();
    let mut cov = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let levels = spectral_levels(d, n_max, hat_coords_general(&points[i], &points[j])?)?;
            let v = weighted_levels(&levels, &weights);
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok(cov)
}

/// Smallest and largest relative jitter `ε` in `ε · trace / dim`.
pub const JITTER_MIN: f64 = 1e-12;
pub const JITTER_MAX: f64 = 1e-6;

/// Cholesky sampler for a centered Gaussian vector.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    factor: DMatrix<f64>,
    jitter: f64,
}

impl GaussianSampler {
    /// Factors `cov`, adding `ε · trace/dim · I` with `ε` doubling from
    /// `1e-12` up to `1e-6` when the plain factorization fails.
    pub fn new(cov: DMatrix<f64>) -> Result<Self> {
        let m = cov.nrows();
        if cov.ncols() != m {
            return Err(Error::DimensionMismatch {
                left: m,
                right: cov.ncols(),
            });
        }
        let scale = cov.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for i in 0..m {
            for j in 0..i {
                ensure_finite(cov[(i, j)], "covariance")?;
                if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
                    return Err(Error::Domain {
                        param: "covariance asymmetry",
                        value: (cov[(i, j)] - cov[(j, i)]).abs(),
                        expected: "symmetric to 1e-12",
                    });
                }
            }
        }
        if let Some(ch) = Cholesky::new(cov.clone()) {
            return Ok(Self {
                factor: ch.unpack(),
                jitter: 0.0,
            });
        }
        let base = cov.trace() / m.max(1) as f64;
        let mut eps = JITTER_MIN;
        while eps <= JITTER_MAX * (1.0 + 1e-12) {
            let shift = eps * base;
            let mut shifted = cov.clone();
            for i in 0..m {
                shifted[(i, i)] += shift;
            }
            if let Some(ch) = Cholesky::<f64, Dyn>::new(shifted) {
                return Ok(Self {
                    factor: ch.unpack(),
                    jitter: shift,
                });
            }
            eps *= 2.0;
        }
        Err(Error::NotPositiveDefinite {
            max_jitter: JITTER_MAX * base,
        })
    }

    pub fn dimension(&self) -> usize {
        self.factor.nrows()
    }

    /// Absolute diagonal shift used by the factorization.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    /// Draw number `index` under `seed`.
    pub fn draw(&self, seed: u64, index: u64) -> DVector<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let g = DVector::from_iterator(self.dimension(), (0..self.dimension()).map(|_| StandardNormal.sample(&mut rng)));
        &self.factor * g
    }
}

/// Draws of a Gaussian field at a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub points: Vec<Vec<f64>>,
    pub covariance: DMatrix<f64>,
    /// One row per draw, one column per point.
    pub draws: DMatrix<f64>,
    pub seed: u64,
    pub jitter: f64,
}

impl FieldSample {
    /// Assembles a sample from rows produced by [`GaussianSampler::draw`].
    pub fn from_rows(
        points: Vec<Vec<f64>>,
        covariance: DMatrix<f64>,
        rows: &[DVector<f64>],
        seed: u64,
        jitter: f64,
    ) -> Self {
        let m = covariance.nrows();
        let draws = DMatrix::from_fn(rows.len(), m, |k, i| rows[k][i]);
        Self {
            points,
            covariance,
            draws,
            seed,
            jitter,
        }
    }

    /// `(1/N) Σ_k x_k x_kᵀ`.
    pub fn empirical_covariance(&self) -> DMatrix<f64> {
        empirical_covariance(&self.draws)
    }

    /// `‖Ĉ - C‖_F / ‖C‖_F`.
    pub fn covariance_error(&self) -> f64 {
        (self.empirical_covariance() - &self.covariance).norm() / self.covariance.norm()
    }
}

/// `(1/N) Σ_k x_k x_kᵀ` over the rows of `draws`.
pub fn empirical_covariance(draws: &DMatrix<f64>) -> DMatrix<f64> {
    let n = draws.nrows().max(1) as f64;
    draws.transpose() * draws / n
}

/// `num_draws` draws from `N(0, cov)` under `seed`.
pub fn sample_field(points: Vec<Vec<f64>>, cov: DMatrix<f64>, num_draws: usize, seed: u64) -> Result<FieldSample> {
    let sampler = GaussianSampler::new(cov.clone())?;
    let rows: Vec<DVector<f64>> = (0..num_draws as u64).map(|k| sampler.draw(seed, k)).collect();
    Ok(FieldSample::from_rows(points, cov, &rows, seed, sampler.jitter()))
}

/// Kolmogorov–Smirnov distance between a sample and `N(0, σ²)`.
pub fn ks_statistic(sample: &[f64], sigma: f64) -> f64 {
    let mut v: Vec<f64> = sample.iter().map(|x| x / sigma).collect();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            let f = 0.5 * libm::erfc(-x / core::f64::consts::SQRT_2);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the Kolmogorov–Smirnov statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / libm::sqrt(n as f64)
}

/// Weights `c_n` with frequencies `λ_n = n^θ` of the stationary process on
/// a great circle.
#[derive(Debug, Clone, PartialEq)]
pub struct StationarySpec {
    pub weights: WeightSequence,
    pub theta: f64,
}

/// Truncated stationary kernel value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryValue {
    pub value: f64,
    /// Last index summed.
    pub terms: u64,
    /// Upper bound of `Σ_{n > terms} c_n`.
    pub tail_bound: f64,
}

/// Relative tail at which the stationary kernel is truncated.
pub const STATIONARY_TOLERANCE: f64 = 1e-8;

/// Hard cap on the number of terms of the stationary kernel.
pub const STATIONARY_MAX_TERMS: u64 = 1 << 20;

impl StationarySpec {
    pub fn new(weights: WeightSequence, theta: f64) -> Result<Self> {
        ensure_finite(theta, "theta")?;
        if theta <= 0.0 {
            return Err(Error::Domain {
                param: "theta",
                value: theta,
                expected: "theta > 0",
            });
        }
        if !weights.summable() {
            return Err(Error::NotSummable);
        }
        Ok(Self { weights, theta })
    }

    /// Number of terms whose remaining tail is at most
    /// `1e-8 Σ c_n`, capped at `2^20`, with that tail's upper bound.
    pub fn truncation(&self) -> Result<(u64, f64)> {
        let cap = match &self.weights {
            WeightSequence::Explicit(v) => (v.len() as u64).saturating_sub(1),
            WeightSequence::Law { .. } => STATIONARY_MAX_TERMS,
        };
        let tails = Tails::new(&self.weights, cap.min(STATIONARY_MAX_TERMS))?;
        let total = tails.total().ok_or(Error::NotSummable)?.upper;
        let goal = STATIONARY_TOLERANCE * total;
        let (mut lo, mut hi) = (0u64, cap);
        let tail_after = |n: u64| tails.tail(n + 1).map_or(f64::INFINITY, |b| b.upper);
        if tail_after(hi) > goal {
            return Ok((hi, tail_after(hi)));
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if tail_after(mid) <= goal {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((hi, tail_after(hi)))
    }

    fn frequency(&self, n: u64) -> f64 {
        libm::pow(n as f64, self.theta)
    }

    fn sum_terms(&self, terms: u64, f: impl Fn(f64, f64) -> f64) -> f64 {
        let s: NeumaierSum = (1..=terms)
            .map(|n| f(self.weights.value(n), self.frequency(n)))
            .collect();
        s.total()
    }
}

/// `K(r) = Σ_n c_n J_0(λ_n r)`.
pub fn stationary_kernel(spec: &StationarySpec, r: f64) -> Result<StationaryValue> {
    check_distance(r)?;
    let (terms, tail_bound) = spec.truncation()?;
    Ok(StationaryValue {
        value: spec.sum_terms(terms, |c, l| c * libm::j0(l * r)),
        terms,
        tail_bound,
    })
}

/// `2 (K(0) - K(r)) = Σ_n 2 c_n (1 - J_0(λ_n r))`, summed termwise.
pub fn stationary_increment(spec: &StationarySpec, r: f64) -> Result<StationaryValue> {
    check_distance(r)?;
    let (terms, tail_bound) = spec.truncation()?;
    Ok(StationaryValue {
        value: spec.sum_terms(terms, |c, l| 2.0 * c * (1.0 - libm::j0(l * r))),
        terms,
        tail_bound: 2.0 * tail_bound,
    })
}

/// `Σ_n c_n min(1, λ_n r)²`.
pub fn stationary_reference(spec: &StationarySpec, r: f64) -> Result<StationaryValue> {
    check_distance(r)?;
    let (terms, tail_bound) = spec.truncation()?;
    Ok(StationaryValue {
        value: spec.sum_terms(terms, |c, l| {
            let m = (l * r).min(1.0);
            c * m * m
        }),
        terms,
        tail_bound,
    })
}

fn check_distance(r: f64) -> Result<()> {
    ensure_finite(r, "r")?;
    if r < 0.0 {
        return Err(Error::Domain {
            param: "r",
            value: r,
            expected: "r >= 0",
        });
    }
    Ok(())
}

/// Monte-Carlo estimate of `E sup_i |Σ_j a_ij g_ij|` with its bound form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSup {
    pub mean_sup: f64,
    /// `sqrt(ln(2 + I)) · max_i ‖a_i‖`.
    pub bound: f64,
    pub trials: usize,
}

impl GaussianSup {
    pub fn ratio(&self) -> f64 {
        if self.bound == 0.0 {
            0.0
        } else {
            self.mean_sup / self.bound
        }
    }
}

/// Stream reserved for the row directions of [`gaussian_sup_matrix`].
const DIRECTION_STREAM: u64 = u64::MAX;

/// `I × J` matrix whose rows have the given norms and directions drawn
/// uniformly on the sphere under `seed`.
pub fn gaussian_sup_matrix(j: usize, row_norms: &[f64], seed: u64) -> Result<DMatrix<f64>> {
    if j == 0 || row_norms.is_empty() {
        return Err(Error::Domain {
            param: "I, J",
            value: 0.0,
            expected: "I, J >= 1",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(DIRECTION_STREAM);
    let mut a = DMatrix::zeros(row_norms.len(), j);
    for (i, &norm) in row_norms.iter().enumerate() {
        ensure_finite(norm, "row norm")?;
        let mut row: Vec<f64> = (0..j).map(|_| StandardNormal.sample(&mut rng)).collect();
        let len = libm::sqrt(row.iter().map(|v| v * v).sum());
        for v in &mut row {
            *v *= norm / len;
        }
        for (k, v) in row.into_iter().enumerate() {
            a[(i, k)] = v;
        }
    }
    Ok(a)
}

/// `sup_i |Σ_j a_ij g_ij|` for trial `trial` under `seed`.
pub fn gaussian_sup_trial(a: &DMatrix<f64>, seed: u64, trial: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut best = 0.0f64;
    for i in 0..a.nrows() {
        let mut s = 0.0;
        for k in 0..a.ncols() {
            let g: f64 = StandardNormal.sample(&mut rng);
            s += a[(i, k)] * g;
        }
        best = best.max(s.abs());
    }
    best
}

/// Combines per-trial suprema into a [`GaussianSup`].
pub fn gaussian_sup_summary(row_norms: &[f64], sups: &[f64]) -> GaussianSup {
    let max_norm = row_norms.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let s: NeumaierSum = sups.iter().copied().collect();
    GaussianSup {
        mean_sup: s.total() / sups.len().max(1) as f64,
        bound: libm::sqrt(libm::log(2.0 + row_norms.len() as f64)) * max_norm,
        trials: sups.len(),
    }
}

/// Monte-Carlo `E sup_i |Σ_j a_ij g_ij|` for matrices with the given row norms.
pub fn gaussian_sup_test(i: usize, j: usize, row_norms: &[f64], trials: usize, seed: u64) -> Result<GaussianSup> {
    if row_norms.len() != i {
        return Err(Error::DimensionMismatch {
            left: row_norms.len(),
            right: i,
        });
    }
    let a = gaussian_sup_matrix(j, row_norms, seed)?;
    let sups: Vec<f64> = (0..trials as u64).map(|t| gaussian_sup_trial(&a, seed, t)).collect();
    Ok(gaussian_sup_summary(row_norms, &sups))
}

/// Equispaced points on the arc of the great circle `S¹ × {0}^{d-2}` from
/// angle `0` to `arc`.
pub fn arc_grid(d: u32, count: usize, arc: f64) -> Vec<Vec<f64>> {
    let step = if count > 1 { arc / (count - 1) as f64 } else { 0.0 };
    (0..count)
        .map(|k| {
            let mut p = alloc::vec![0.0; d as usize];
            p[0] = libm::cos(k as f64 * step);
            p[1] = libm::sin(k as f64 * step);
            p
        })
        .collect()
}

/// Largest level sampled by [`sup_norm_partial_sums`].
pub const BLOCK_LEVEL_CAP: u64 = 1 << 11;

/// Largest block index of [`sup_norm_partial_sums`].
pub const MAX_SUP_BLOCK: u32 = 3;

/// Levels `[2^{2^ℓ}, 2^{2^{ℓ+1}})` of block `ℓ`, capped at [`BLOCK_LEVEL_CAP`].
pub fn block_levels(ell: u32) -> (u64, u64, bool) {
    let lo = 1u64 << (1u32 << ell);
    let hi = (1u64 << (1u32 << (ell + 1))) - 1;
    (lo, hi.min(BLOCK_LEVEL_CAP), hi > BLOCK_LEVEL_CAP)
}

/// Monte-Carlo sup statistics of one block field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockSup {
    pub ell: u32,
    pub n_lo: u64,
    pub n_hi: u64,
    /// Whether the block was cut at [`BLOCK_LEVEL_CAP`].
    pub truncated: bool,
    pub mean_sup: f64,
    /// `2^{ℓ/2} (Σ_{block} c(n)² n^{-d/2})^{1/2}`.
    pub weight: f64,
    pub jitter: f64,
}

impl BlockSup {
    pub fn ratio(&self) -> f64 {
        if self.weight == 0.0 {
            0.0
        } else {
            self.mean_sup / self.weight
        }
    }
}

/// Block covariance on an equispaced arc grid, built from one chord per lag.
pub fn block_covariance(d: u32, coeffs: &CoefficientSequence, grid: &[Vec<f64>], lo: u64, hi: u64) -> Result<DMatrix<f64>> {
    check_points(d, grid)?;
    let m = grid.len();
    let weights: Vec<f64> = level_weights(d, coeffs, hi as usize)
        .into_iter()
        .enumerate()
        .map(|(n, w)| if (n as u64) < lo { 0.0 } else { w })
        .collect();
    let mut by_lag = Vec::with_capacity(m);
    for lag in 0..m {
        let diff: f64 = grid[0].iter().zip(&grid[lag]).map(|(a, b)| (a - b) * (a - b)).sum();
        let pair = SpherePair::unit(d, libm::sqrt(diff).min(2.0))?;
        let levels = spectral_levels(d, hi as usize, hat_coords(pair))?;
        by_lag.push(weighted_levels(&levels, &weights));
    }
    Ok(DMatrix::from_fn(m, m, |i, j| by_lag[i.abs_diff(j)]))
}

/// Per-block `E sup` of the block fields over an arc grid.
pub fn sup_norm_partial_sums(
    d: u32,
    coeffs: &CoefficientSequence,
    grid: &[Vec<f64>],
    ell_max: u32,
    num_draws: usize,
    seed: u64,
) -> Result<Vec<BlockSup>> {
    if ell_max > MAX_SUP_BLOCK {
        return Err(Error::SizeGuard {
            needed: ell_max as u64,
            limit: MAX_SUP_BLOCK as u64,
        });
    }
    let half = d as f64 / 2.0;
    let mut out = Vec::with_capacity(ell_max as usize + 1);
    for ell in 0..=ell_max {
        let (lo, hi, truncated) = block_levels(ell);
        let mass: NeumaierSum = (lo..=hi)
            .map(|n| {
                let c = coeffs.value(n);
                c * c * libm::pow(n as f64, -half)
            })
            .collect();
        let weight = libm::pow(2.0, ell as f64 / 2.0) * libm::sqrt(mass.total());
        if mass.total() == 0.0 {
            out.push(BlockSup {
                ell,
                n_lo: lo,
                n_hi: hi,
                truncated,
                mean_sup: 0.0,
                weight: 0.0,
                jitter: 0.0,
            });
            continue;
        }
        let cov = block_covariance(d, coeffs, grid, lo, hi)?;
        let sampler = GaussianSampler::new(cov)?;
        let sups: NeumaierSum = (0..num_draws as u64)
            .map(|k| sampler.draw(seed ^ ((ell as u64) << 56), k).amax())
            .collect();
        out.push(BlockSup {
            ell,
            n_lo: lo,
            n_hi: hi,
            truncated,
            mean_sup: sups.total() / num_draws.max(1) as f64,
            weight,
            jitter: sampler.jitter(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dudley::dudley_distance;
    use crate::spectral::spectral_at;
    use alloc::vec;

    fn sphere_points(d: u32, m: usize) -> Vec<Vec<f64>> {
        (0..m)
            .map(|k| {
                let a = 0.37 * k as f64;
                let b = 0.21 * k as f64 + 0.1;
                let mut p = vec![0.0; d as usize];
                p[0] = libm::cos(a) * libm::cos(b);
                p[1] = libm::sin(a) * libm::cos(b);
                if d > 2 {
                    p[2] = libm::sin(b);
                } else {
                    p[0] = libm::cos(a + b);
                    p[1] = libm::sin(a + b);
                }
                p
            })
            .collect()
    }

    #[test]
    fn single_point_variance() {
        let n = 400usize;
        let mut vals = vec![0.0; n + 1];
        vals[n] = 1.5;
        let c = CoefficientSequence::explicit(vals).unwrap();
        let x = vec![vec![0.6, 0.8]];
        let v = cov_of(2, &c, &x, n)[(0, 0)];
        let exact = 2.25 * spectral_at(n, SpherePair::unit(2, 0.0).unwrap()).unwrap() / (n as f64 + 1.0);
        assert!((v - exact).abs() < 1e-15);
        let asym = 2.25 / (2.0 * core::f64::consts::PI * (n as f64 + 1.0));
        let t = 2.0 * libm::sqrt(2.0 * n as f64);
        let envelope = libm::sqrt(2.0 / (core::f64::consts::PI * t));
        assert!((v / asym - 1.0).abs() < envelope + 0.01, "{}", v / asym);
    }

    fn cov_of(d: u32, c: &CoefficientSequence, p: &[Vec<f64>], n: usize) -> DMatrix<f64> {
        field_covariance(d, c, p, n).unwrap()
    }

    #[test]
    fn duplicates_rejected() {
        let c = CoefficientSequence::power_log(0.5, 0.0, 1).unwrap();
        let p = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(
            field_covariance(2, &c, &p, 5),
            Err(Error::DuplicatePoints { first: 0, second: 2 })
        );
        assert!(field_covariance(3, &c, &p[..1], 5).is_err());
    }

    #[test]
    fn covariance_matches_dudley() {
        let c = CoefficientSequence::power_log(1.0, 0.0, 1).unwrap();
        let pair = SpherePair::unit(3, 0.3).unwrap();
        let (x, y) = pair.representatives();
        let cov = cov_of(3, &c, &[x, y], 80);
        let delta = dudley_distance(&c, pair, 80).unwrap().value;
        assert!((2.0 * (cov[(0, 0)] - cov[(0, 1)]) - delta * delta).abs() < 1e-13);
        assert!((cov[(0, 1)] - cov[(1, 0)]).abs() == 0.0);
    }

    #[test]
    fn identity_sampling() {
        let s = sample_field(vec![], DMatrix::identity(3, 3), 100_000, 11).unwrap();
        let emp = s.empirical_covariance();
        for i in 0..3 {
            assert!((emp[(i, i)] - 1.0).abs() < 0.02);
        }
        assert_eq!(s.jitter, 0.0);
    }

    #[test]
    fn sphere_sampling_law() {
        let c = CoefficientSequence::power_log(0.75, 0.0, 1).unwrap();
        let pts = sphere_points(2, 10);
        let cov = cov_of(2, &c, &pts, 40);
        let s = sample_field(pts, cov, 20_000, 7).unwrap();
        assert!(s.covariance_error() < 0.05, "{}", s.covariance_error());
        let again = sample_field(s.points.clone(), s.covariance.clone(), 20_000, 7).unwrap();
        assert_eq!(again.draws, s.draws);
    }

    #[test]
    fn order_independent_draws() {
        let sampler = GaussianSampler::new(DMatrix::identity(4, 4)).unwrap();
        let forward: Vec<DVector<f64>> = (0..50).map(|k| sampler.draw(3, k)).collect();
        let backward: Vec<DVector<f64>> = (0..50).rev().map(|k| sampler.draw(3, k)).collect();
        for k in 0..50 {
            assert_eq!(forward[k], backward[49 - k]);
        }
        assert_ne!(sampler.draw(3, 0), sampler.draw(4, 0));
    }

    #[test]
    fn marginal_normality() {
        let c = CoefficientSequence::power_log(0.75, 0.0, 1).unwrap();
        let pts = sphere_points(3, 4);
        let cov = cov_of(3, &c, &pts, 30);
        let sampler = GaussianSampler::new(cov.clone()).unwrap();
        let runs = 40;
        let mut passed = 0;
        for run in 0..runs {
            let col: Vec<f64> = (0..2000).map(|k| sampler.draw(run, k)[2]).collect();
            if ks_statistic(&col, libm::sqrt(cov[(2, 2)])) < ks_critical_1pct(2000) {
                passed += 1;
            }
        }
        assert!(passed as f64 >= 0.95 * runs as f64, "{passed}/{runs}");
    }

    #[test]
    fn jitter_for_singular() {
        let mut m = DMatrix::from_element(3, 3, 1.0);
        m[(2, 2)] = 1.0;
        let s = GaussianSampler::new(m).unwrap();
        assert!(s.jitter() > 0.0 && s.jitter() <= 1e-6);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(GaussianSampler::new(bad), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn stationary_examples() {
        let one = StationarySpec::new(WeightSequence::explicit(vec![0.0, 1.0]).unwrap(), 1.0).unwrap();
        assert_eq!(stationary_kernel(&one, 0.0).unwrap().value, 1.0);
        for r in [1e-2, 1e-3] {
            let inc = stationary_increment(&one, r).unwrap().value;
            assert!((inc / (r * r / 2.0) - 1.0).abs() < r * r);
        }
        let spec = StationarySpec::new(WeightSequence::law(3.0, 0.0, 1).unwrap(), 0.5).unwrap();
        let k0 = stationary_kernel(&spec, 0.0).unwrap();
        assert!((k0.value - 1.2020569031595942).abs() < 1e-8 * 1.21);
        assert!(k0.tail_bound <= 1e-8 * 1.21);
        for i in 1..=30 {
            let r = 0.05 * i as f64;
            let k = stationary_kernel(&spec, r).unwrap().value;
            let inc = stationary_increment(&spec, r).unwrap().value;
            assert!((2.0 * (k0.value - k) - inc).abs() < 1e-10);
            let ratio = inc / stationary_reference(&spec, r).unwrap().value;
            assert!((0.4..=3.0).contains(&ratio), "r={r}: {ratio}");
        }
    }

    #[test]
    fn libm_j0_agrees() {
        for i in 0..50 {
            let t = 0.37 * i as f64;
            assert!((libm::j0(t) - crate::special_fn::bessel_j0(t).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn gaussian_sup_examples() {
        let g = gaussian_sup_test(1, 1, &[1.0], 100_000, 5).unwrap();
        let half_normal = libm::sqrt(2.0 / core::f64::consts::PI);
        assert!((g.mean_sup / half_normal - 1.0).abs() < 0.02);
        let z = gaussian_sup_test(4, 8, &[0.0; 4], 100, 5).unwrap();
        assert_eq!(z.mean_sup, 0.0);
        assert_eq!(z.ratio(), 0.0);
    }

    #[test]
    fn block_sups() {
        let d = 2;
        let grid = arc_grid(d, 24, 1.0);
        let zero = sup_norm_partial_sums(d, &CoefficientSequence::zero(), &grid, 2, 50, 1).unwrap();
        assert!(zero.iter().all(|b| b.mean_sup == 0.0));
        let mut vals = vec![0.0; 16];
        for v in vals.iter_mut().skip(4) {
            *v = 1.0;
        }
        let single = sup_norm_partial_sums(d, &CoefficientSequence::explicit(vals).unwrap(), &grid, 2, 200, 1).unwrap();
        assert_eq!(single[0].mean_sup, 0.0);
        assert!(single[1].mean_sup > 0.0 && single[1].ratio() > 0.0);
        assert_eq!(single[2].mean_sup, 0.0);
        assert_eq!(block_levels(3), (256, 2048, true));
        let cov = block_covariance(d, &CoefficientSequence::power_log(0.5, 0.0, 1).unwrap(), &grid[..5], 4, 15).unwrap();
        let direct = covariance_entry_block(d, &grid[1], &grid[4], 4, 15);
        assert!((cov[(1, 4)] - direct).abs() < 1e-13);
    }

    fn covariance_entry_block(d: u32, x: &[f64], y: &[f64], lo: usize, hi: usize) -> f64 {
        let mut vals = vec![0.0; hi + 1];
        for (n, v) in vals.iter_mut().enumerate().skip(lo) {
            *v = 1.0 / libm::sqrt(n as f64);
        }
        covariance_entry(d, &CoefficientSequence::explicit(vals).unwrap(), x, y, hi).unwrap()
    }
}
