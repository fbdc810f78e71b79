//! Dudley pseudo-distances of the random series
//! `f^ω = Σ_n (‖f_n‖ / sqrt(dim E_n)) Σ_k g_{n,k}(ω) φ_{n,k}`.
//!
//! Level by level, `δ_n(x, y)² = 2 (e_{d,n}(x,x) - e_{d,n}(x,y)) / dim E_n` on a
//! common sphere, and `δ(x, y)² = Σ_n ‖f_n‖² δ_n(x, y)²`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{hat_coords, hat_coords_general, SpherePair};
use crate::quad::NeumaierSum;
use crate::series::{Bracket, PowerLog};
use crate::special_fn::{bd_weights, eigenspace_dim_f64, hermite_batch};
use crate::spectral::{diagonal_gap, spectral_exact};

/// The norms `c(n) = ‖f_n‖_{L²}`, either listed or given by the law
/// `c(n) = n^{-a} (ln(n+1))^{-b}` for `n ≥ n_0` (and `0` below).
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientSequence {
    /// `values[n] = c(n)` for `n < values.len()`, zero beyond.
    Explicit(Vec<f64>),
    PowerLog { a: f64, b: f64, n0: u64 },
}

impl CoefficientSequence {
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        for v in &values {
            ensure_finite(*v, "c(n)")?;
            if *v < 0.0 {
                return Err(Error::Domain {
                    param: "c(n)",
                    value: *v,
                    expected: "c(n) >= 0",
                });
            }
        }
        Ok(Self::Explicit(values))
    }

    pub fn power_log(a: f64, b: f64, n0: u64) -> Result<Self> {
        ensure_finite(a, "a")?;
        ensure_finite(b, "b")?;
        Ok(Self::PowerLog { a, b, n0: n0.max(1) })
    }

    pub fn zero() -> Self {
        Self::Explicit(Vec::new())
    }

    /// `c(n)`.
    pub fn value(&self, n: u64) -> f64 {
        match self {
            Self::Explicit(v) => v.get(n as usize).copied().unwrap_or(0.0),
            Self::PowerLog { a, b, n0 } => {
                if n < *n0 {
                    0.0
                } else {
                    PowerLog::new(*a, *b).value(n as f64)
                }
            }
        }
    }

    /// One past the last nonzero index for explicit sequences.
    pub fn support_end(&self) -> Option<u64> {
        match self {
            Self::Explicit(v) => Some(v.iter().rposition(|c| *c != 0.0).map_or(0, |i| i as u64 + 1)),
            Self::PowerLog { .. } => None,
        }
    }

    /// First index carrying a nonzero law value.
    pub fn law_start(&self) -> u64 {
        match self {
            Self::Explicit(_) => 0,
            Self::PowerLog { n0, .. } => *n0,
        }
    }

    /// `c(n)^k n^{-s}` as a power-log term, for law sequences.
    pub fn power_log_term(&self, k: f64, s: f64) -> Option<PowerLog> {
        match self {
            Self::Explicit(_) => None,
            Self::PowerLog { a, b, .. } => Some(PowerLog::new(k * a + s, k * b)),
        }
    }

    /// `Σ_{n ≥ from} c(n)^k n^{-s}` over `n ≥ 1`, bracketed, or `None` when it
    /// diverges or cannot be bracketed.
    pub fn weighted_tail(&self, k: f64, s: f64, from: u64) -> Option<Bracket> {
        let from = from.max(1);
        match self {
            Self::Explicit(v) => {
                let sum: NeumaierSum = (from as usize..v.len())
                    .map(|n| libm::pow(v[n], k) * libm::pow(n as f64, -s))
                    .collect();
                Some(Bracket::exact(sum.total()))
            }
            Self::PowerLog { n0, .. } => {
                let g = self.power_log_term(k, s)?;
                g.tail_sum(from.max(*n0))
            }
        }
    }

    /// `Σ_{n=from}^{to} c(n)^k n^{-s}` over `n ≥ 1`, bracketed.
    pub fn weighted_range(&self, k: f64, s: f64, from: u64, to: f64) -> Option<Bracket> {
        let from = from.max(1);
        match self {
            Self::Explicit(v) => {
                let hi = (to.min(v.len() as f64 - 1.0)).max(-1.0);
                let sum: NeumaierSum = (from as usize..)
                    .take_while(|n| (*n as f64) <= hi)
                    .map(|n| libm::pow(v[n], k) * libm::pow(n as f64, -s))
                    .collect();
                Some(Bracket::exact(sum.total()))
            }
            Self::PowerLog { n0, .. } => {
                let g = self.power_log_term(k, s)?;
                g.range_sum(from.max(*n0), to)
            }
        }
    }
}

/// `δ_n(x, y)` for a pair on a common sphere, clamping round-off below zero.
pub fn delta_n(n: usize, pair: SpherePair) -> Result<f64> {
    let gap = diagonal_gap(n, pair)?;
    let dim = eigenspace_dim_f64(pair.dimension(), n);
    Ok(libm::sqrt((2.0 * gap / dim).max(0.0)))
}

/// `δ_n(x, y)` for arbitrary points, from
/// `δ_n² = (e(x,x) + e(y,y) - 2 e(x,y)) / dim E_n`.
pub fn delta_n_points(d: u32, n: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    let exx = spectral_exact(d, n, hat_coords_general(x, x)?)?;
    let eyy = spectral_exact(d, n, hat_coords_general(y, y)?)?;
    let exy = spectral_exact(d, n, hat_coords_general(x, y)?)?;
    let dim = eigenspace_dim_f64(d, n);
    Ok(libm::sqrt(((exx + eyy - 2.0 * exy) / dim).max(0.0)))
}

/// `e_{d,n}(x,x) - e_{d,n}(x,y)` for every `n ≤ n_max`, in `O(n_max²)`.
pub fn diagonal_gap_levels(n_max: usize, pair: SpherePair) -> Result<Vec<f64>> {
    let d = pair.dimension();
    let hc = hat_coords(pair);
    let hr = hermite_batch(n_max, pair.radius())?;
    let hx = hermite_batch(n_max, hc.x_hat)?;
    let hy = hermite_batch(n_max, hc.y_hat)?;
    let b = bd_weights(d, n_max / 2)?;
    let omega: Vec<f64> = (0..=n_max)
        .map(|k| hr.get(k) * hr.get(k) - hx.get(k) * hy.get(k))
        .collect();
    let pre = libm::pow(PI, -(d as f64 - 1.0) / 2.0);
    Ok((0..=n_max)
        .map(|n| {
            let s: NeumaierSum = (0..=n / 2).map(|ell| b[ell] * omega[n - 2 * ell]).collect();
            pre * s.total()
        })
        .collect())
}

/// Truncated Dudley distance and an analytic majorant of the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DudleyDistance {
    /// `sqrt(Σ_{n ≤ n_max} c(n)² δ_n²)`.
    pub value: f64,
    /// Majorant of `Σ_{n > n_max} c(n)² δ_n²`; infinite when the tail
    /// series diverges.
    pub tail_majorant: f64,
}

/// `K_d` with `δ_n² ≤ K_d n^{-d/2}` on the unit sphere, from
/// `δ_n² ≤ 4 e_{d,n}(x,x) / dim E_n` and the diagonal asymptotics
/// `e_{d,n}(x,x) ≈ n^{d/2-1} / ((2π)^{d/2} Γ(d/2))`, `dim E_n ≈ n^{d-1}/(d-1)!`,
/// with a factor 2 of headroom.
pub fn sup_constant(d: u32) -> f64 {
    let half = d as f64 / 2.0;
    let fact: f64 = (1..d).map(|i| i as f64).product();
    8.0 * fact / (libm::pow(2.0 * PI, half) * libm::tgamma(half))
}

/// `δ(x, y)` truncated at `n_max`.
pub fn dudley_distance(coeffs: &CoefficientSequence, pair: SpherePair, n_max: usize) -> Result<DudleyDistance> {
    let d = pair.dimension();
    let gaps = diagonal_gap_levels(n_max, pair)?;
    let sum: NeumaierSum = gaps
        .iter()
        .enumerate()
        .map(|(n, g)| {
            let c = coeffs.value(n as u64);
            c * c * (2.0 * g / eigenspace_dim_f64(d, n)).max(0.0)
        })
        .collect();
    let tail = coeffs
        .weighted_tail(2.0, d as f64 / 2.0, n_max as u64 + 1)
        .map_or(f64::INFINITY, |b| b.upper * sup_constant(d));
    Ok(DudleyDistance {
        value: libm::sqrt(sum.total()),
        tail_majorant: tail,
    })
}

/// One cell of a Dudley scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanCell {
    pub n: usize,
    pub r: f64,
    pub delta: f64,
    /// `δ_n n^{d/4} / min(1, √n r)`.
    pub ratio: f64,
}

/// Ratio table of a Dudley scan and its extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct DudleyScan {
    pub dimension: u32,
    pub cells: Vec<ScanCell>,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl DudleyScan {
    pub fn from_cells(dimension: u32, cells: Vec<ScanCell>) -> Self {
        let min_ratio = cells.iter().map(|c| c.ratio).fold(f64::INFINITY, f64::min);
        let max_ratio = cells.iter().map(|c| c.ratio).fold(0.0, f64::max);
        Self {
            dimension,
            cells,
            min_ratio,
            max_ratio,
        }
    }

    pub fn band(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }
}

/// One scan cell on the unit sphere, `r ∈ (0, 1]`.
pub fn scan_cell(d: u32, n: usize, r: f64) -> Result<ScanCell> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain {
            param: "r",
            value: r,
            expected: "0 < r <= 1",
        });
    }
    let delta = delta_n(n, SpherePair::unit(d, r)?)?;
    let nf = n as f64;
    let ratio = delta * libm::pow(nf, d as f64 / 4.0) / (libm::sqrt(nf) * r).min(1.0);
    Ok(ScanCell { n, r, delta, ratio })
}

/// `δ_n n^{d/4} / min(1, √n r)` over levels `ns` and chords `rs ⊂ (0, 1]`.
pub fn dudley_scan(d: u32, ns: &[usize], rs: &[f64]) -> Result<DudleyScan> {
    let mut cells = Vec::with_capacity(ns.len() * rs.len());
    for &n in ns {
        for &r in rs {
            cells.push(scan_cell(d, n, r)?);
        }
    }
    Ok(DudleyScan::from_cells(d, cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{chord_grid, spectral_at};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = libm::sqrt(v.iter().map(|a| a * a).sum::<f64>());
            if n > 0.1 {
                return v.iter().map(|a| a / n).collect();
            }
        }
    }

    #[test]
    fn coincident_and_antipodal() {
        for d in 2..=4 {
            for n in [0usize, 7, 64] {
                assert_eq!(delta_n(n, SpherePair::unit(d, 0.0).unwrap()).unwrap(), 0.0);
            }
            for n in [2usize, 10, 64] {
                assert!(delta_n(n, SpherePair::unit(d, 2.0).unwrap()).unwrap() < 1e-12);
            }
            assert!(delta_n(11, SpherePair::unit(d, 2.0).unwrap()).unwrap() > 0.0);
        }
    }

    #[test]
    fn identity_matches_direct_form() {
        for d in 2..=3 {
            for n in [5usize, 40] {
                let pair = SpherePair::unit(d, 0.4).unwrap();
                let direct = 2.0 * (spectral_at(n, pair.diagonal()).unwrap() - spectral_at(n, pair).unwrap())
                    / eigenspace_dim_f64(d, n);
                assert!((delta_n(n, pair).unwrap() - libm::sqrt(direct)).abs() < 1e-12);
                let (x, y) = pair.representatives();
                assert!((delta_n_points(d, n, &x, &y).unwrap() - libm::sqrt(direct)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gap_levels_match_single() {
        let pair = SpherePair::unit(3, 0.3).unwrap();
        let levels = diagonal_gap_levels(50, pair).unwrap();
        for (n, g) in levels.iter().enumerate() {
            assert!((g - diagonal_gap(n, pair).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for d in 2..=3u32 {
            for _ in 0..50 {
                let x = random_unit(&mut rng, d as usize);
                let y = random_unit(&mut rng, d as usize);
                let z = random_unit(&mut rng, d as usize);
                for n in [3usize, 30] {
                    let dxy = delta_n_points(d, n, &x, &y).unwrap();
                    let dyz = delta_n_points(d, n, &y, &z).unwrap();
                    let dxz = delta_n_points(d, n, &x, &z).unwrap();
                    assert!(dxz <= dxy + dyz + 1e-10);
                    assert_eq!(dxy, delta_n_points(d, n, &y, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn truncated_distance() {
        let pair = SpherePair::unit(2, 0.2).unwrap();
        let zero = dudley_distance(&CoefficientSequence::zero(), pair, 100).unwrap();
        assert_eq!(zero.value, 0.0);
        assert_eq!(zero.tail_majorant, 0.0);
        let law = CoefficientSequence::power_log(1.0, 0.0, 1).unwrap();
        let mut prev = 0.0;
        for n_max in [8usize, 32, 128, 512] {
            let v = dudley_distance(&law, pair, n_max).unwrap();
            assert!(v.value >= prev);
            assert!(v.tail_majorant.is_finite());
            prev = v.value;
        }
    }

    #[test]
    fn distance_within_propagated_band() {
        let d = 2;
        let rs = chord_grid(0.02, 1.0, 40);
        let scan = dudley_scan(d, &[64, 128, 256, 512], &rs).unwrap();
        let (lo, hi) = (scan.min_ratio, scan.max_ratio);
        let law = CoefficientSequence::power_log(1.0, 0.0, 1).unwrap();
        let r = 0.2;
        let n_max = 512;
        let value = dudley_distance(&law, SpherePair::unit(d, r).unwrap(), n_max).unwrap().value;
        let base: f64 = (64..=n_max)
            .map(|n| {
                let nf = n as f64;
                let m = (libm::sqrt(nf) * r).min(1.0);
                nf.powi(-2) / nf * m * m
            })
            .sum();
        let head: f64 = (0..64)
            .map(|n| {
                let c = law.value(n as u64);
                c * c * delta_n(n, SpherePair::unit(d, r).unwrap()).unwrap().powi(2)
            })
            .sum();
        let v2 = value * value - head;
        assert!(v2 >= lo * lo * base * 0.999 && v2 <= hi * hi * base * 1.001);
    }

    #[test]
    fn scan_ratios_bounded() {
        for d in 2..=3u32 {
            let rs = chord_grid(0.02, 1.0, 40);
            let scan = dudley_scan(d, &[64, 128, 256, 512], &rs).unwrap();
            assert!(scan.cells.iter().all(|c| c.ratio.is_finite() && c.ratio > 0.0));
            assert!(scan.band() <= 10.0, "d={d}: {}", scan.band());
        }
        assert!(scan_cell(2, 64, 0.0).is_err());
    }

    #[test]
    fn small_r_limit() {
        let ratios: Vec<f64> = [1e-3, 5e-4, 2.5e-4]
            .iter()
            .map(|&r| scan_cell(3, 128, r).unwrap().ratio)
            .collect();
        assert!((ratios[0] / ratios[2] - 1.0).abs() < 1e-3, "{ratios:?}");
    }

    #[test]
    fn law_sequences_vanish_below_start() {
        let c = CoefficientSequence::power_log(0.5, 1.0, 10).unwrap();
        assert_eq!(c.value(9), 0.0);
        assert!(c.value(10) > 0.0);
        let e = CoefficientSequence::explicit(alloc::vec![0.0, 1.0, 0.5, 0.0]).unwrap();
        assert_eq!(e.support_end(), Some(3));
        assert!(CoefficientSequence::explicit(alloc::vec![-1.0]).is_err());
    }
}
