//! The spectral function `e_{d,n}(x, y)` of the harmonic oscillator, i.e. the
//! kernel of the orthogonal projector onto the eigenspace `E_n`.
//!
//! Every evaluation goes through the hat coordinates of the pair, where
//!
//! `e_{d,n}(x, y) = π^{-(d-1)/2} Σ_{k+2ℓ=n} h_k(x̂) h_k(ŷ) B_d(ℓ)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{hat_coords, hat_coords_general, HatCoords, SpherePair, S_MAX};
use crate::quad::NeumaierSum;
use crate::special_fn::{
    bd_weights, eigenspace_dim, eigenspace_dim_f64, hermite_batch, normalized_bessel, BesselOrder,
    PI_POW_MINUS_QUARTER,
};

fn check_dimension(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain {
            param: "d",
            value: d as f64,
            expected: "d >= 2",
        });
    }
    Ok(())
}

/// `π^{-(d-1)/2}`.
fn prefactor(d: u32) -> f64 {
    libm::pow(PI, -(d as f64 - 1.0) / 2.0)
}

/// `e_{d,n}` at a pair given by its hat coordinates, by the Cauchy product
/// over `k + 2ℓ = n`. Cost `O(n)`.
pub fn spectral_exact(d: u32, n: usize, hc: HatCoords) -> Result<f64> {
    check_dimension(d)?;
    let hx = hermite_batch(n, hc.x_hat)?;
    let hy = hermite_batch(n, hc.y_hat)?;
    let b = bd_weights(d, n / 2)?;
    let sum: NeumaierSum = (0..=n / 2)
        .map(|ell| {
            let k = n - 2 * ell;
            hx.get(k) * hy.get(k) * b[ell]
        })
        .collect();
    Ok(prefactor(d) * sum.total())
}

/// `e_{d,n}` at a sphere pair.
pub fn spectral_at(n: usize, pair: SpherePair) -> Result<f64> {
    spectral_exact(pair.dimension(), n, hat_coords(pair))
}

/// `e_{d,0}(x,y), …, e_{d,n_max}(x,y)` at one pair, in `O(n_max²)`.
pub fn spectral_levels(d: u32, n_max: usize, hc: HatCoords) -> Result<Vec<f64>> {
    check_dimension(d)?;
    let hx = hermite_batch(n_max, hc.x_hat)?;
    let hy = hermite_batch(n_max, hc.y_hat)?;
    let b = bd_weights(d, n_max / 2)?;
    let products: Vec<f64> = hx
        .values()
        .iter()
        .zip(hy.values())
        .map(|(a, c)| a * c)
        .collect();
    let pre = prefactor(d);
    Ok((0..=n_max)
        .map(|n| {
            let sum: NeumaierSum = (0..=n / 2).map(|ell| products[n - 2 * ell] * b[ell]).collect();
            pre * sum.total()
        })
        .collect())
}

/// One-dimensional spectral function `e_{1,n}(x, y) = h_n(x) h_n(y)`.
pub fn e1(n: usize, x: f64, y: f64) -> Result<f64> {
    Ok(hermite_batch(n, x)?.get(n) * hermite_batch(n, y)?.get(n))
}

/// Largest `d · dim E_n` accepted by [`spectral_oracle`].
pub const ORACLE_LIMIT: u64 = 10_000_000;

/// Brute-force `e_{d,n}(x, y)` as the sum over all multi-indices
/// `i_1 + … + i_d = n` of `Π_j h_{i_j}(x_j) h_{i_j}(y_j)`.
pub fn spectral_oracle(d: u32, n: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    if d < 1 {
        return Err(Error::Domain {
            param: "d",
            value: 0.0,
            expected: "d >= 1",
        });
    }
    for v in [x, y] {
        if v.len() != d as usize {
            return Err(Error::DimensionMismatch {
                left: d as usize,
                right: v.len(),
            });
        }
    }
    let dim = eigenspace_dim(d, n as u64)?;
    let needed = dim.saturating_mul(d as u64);
    if needed > ORACLE_LIMIT {
        return Err(Error::SizeGuard {
            needed,
            limit: ORACLE_LIMIT,
        });
    }
    let mut table = Vec::with_capacity(d as usize);
    for (a, b) in x.iter().zip(y) {
        let ha = hermite_batch(n, *a)?;
        let hb = hermite_batch(n, *b)?;
        let row: Vec<f64> = ha
            .values()
            .iter()
            .zip(hb.values())
            .map(|(p, q)| p * q)
            .collect();
        table.push(row);
    }
    let mut sum = NeumaierSum::default();
    compositions(&table, 0, n, 1.0, &mut sum);
    Ok(sum.total())
}

fn compositions(table: &[Vec<f64>], j: usize, remaining: usize, acc: f64, sum: &mut NeumaierSum) {
    if j + 1 == table.len() {
        sum.add(acc * table[j][remaining]);
        return;
    }
    for i in 0..=remaining {
        compositions(table, j + 1, remaining - i, acc * table[j][i], sum);
    }
}

/// `|e_{d,n}(x, y) - (-1)^n e_{d,n}(x, -y)|`.
pub fn parity_check(d: u32, n: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    let minus_y: Vec<f64> = y.iter().map(|v| -v).collect();
    let e = spectral_exact(d, n, hat_coords_general(x, y)?)?;
    let e_minus = spectral_exact(d, n, hat_coords_general(x, &minus_y)?)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok((e - sign * e_minus).abs())
}

/// `n^{d/2-1} (2π)^{-d/2}`, the scale of `e_{d,n}` on the unit sphere.
pub fn bessel_scale(d: u32, n: usize) -> f64 {
    let half = d as f64 / 2.0;
    libm::pow(n as f64, half - 1.0) / libm::pow(2.0 * PI, half)
}

/// One-term approximation `n^{d/2-1} (2π)^{-d/2} J̃_{d/2-1}(sqrt(2n) r)` on
/// the unit sphere.
pub fn bessel_approx(d: u32, n: usize, r: f64) -> Result<f64> {
    ensure_finite(r, "r")?;
    if !(0.0..=2.0).contains(&r) {
        return Err(Error::Domain {
            param: "r",
            value: r,
            expected: "0 <= r <= 2",
        });
    }
    let ord = BesselOrder::new(d)?;
    let u = libm::sqrt(2.0 * n as f64) * r;
    Ok(bessel_scale(d, n) * normalized_bessel(ord, u)?)
}

/// Two-term approximation
/// `n^{d/2-1} (2π)^{-d/2} [J̃(sqrt(2n)|x-y|) + (-1)^n J̃(sqrt(2n)|x+y|)]`
/// on the unit sphere.
pub fn two_term_approx(n: usize, pair: SpherePair) -> Result<f64> {
    if pair.radius() != 1.0 {
        return Err(Error::Domain {
            param: "radius",
            value: pair.radius(),
            expected: "unit sphere",
        });
    }
    let d = pair.dimension();
    let ord = BesselOrder::new(d)?;
    let root = libm::sqrt(2.0 * n as f64);
    let near = normalized_bessel(ord, root * pair.chord())?;
    let far = normalized_bessel(ord, root * pair.sum_norm())?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(bessel_scale(d, n) * (near + sign * far))
}

/// Outcome of the Mehler cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MehlerCheck {
    /// `Σ_{n ≤ n_max} e^{-t(2n+d)} e_{d,n}(x, y)`.
    pub partial: f64,
    /// `(2π sinh 2t)^{-d/2} exp(-tanh(t)|x+y|²/4 - |x-y|²/(4 tanh t))`.
    pub closed_form: f64,
    /// `Σ_{n > n_max} e^{-t(2n+d)} dim(E_n) π^{-d/2}`, which dominates the
    /// truncation error since `|h_k| ≤ π^{-1/4}`.
    pub tail_bound: f64,
}

impl MehlerCheck {
    pub fn deviation(&self) -> f64 {
        (self.partial - self.closed_form).abs()
    }
}

/// Compares a truncated Mehler series with its closed form.
pub fn mehler_partial_sum(d: u32, t: f64, x: &[f64], y: &[f64], n_max: usize) -> Result<MehlerCheck> {
    ensure_finite(t, "t")?;
    if t <= 0.0 {
        return Err(Error::Domain {
            param: "t",
            value: t,
            expected: "t > 0",
        });
    }
    if x.len() != d as usize {
        return Err(Error::DimensionMismatch {
            left: d as usize,
            right: x.len(),
        });
    }
    let hc = hat_coords_general(x, y)?;
    let df = d as f64;
    let levels = spectral_levels(d, n_max, hc)?;
    let partial: NeumaierSum = levels
        .iter()
        .enumerate()
        .map(|(n, e)| libm::exp(-t * (2.0 * n as f64 + df)) * e)
        .collect();
    let sum = hc.sum_norm();
    let diff = hc.chord();
    let th = libm::tanh(t);
    let closed_form = libm::pow(2.0 * PI * libm::sinh(2.0 * t), -df / 2.0)
        * libm::exp(-th * sum * sum / 4.0 - diff * diff / (4.0 * th));
    let scale = libm::pow(PI, -df / 2.0);
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        let term = libm::exp(-t * (2.0 * n as f64 + df)) * eigenspace_dim_f64(d, n) * scale;
        tail += term;
        if term <= 1e-17 * tail || n > n_max + 100_000 {
            break;
        }
        n += 1;
    }
    Ok(MehlerCheck {
        partial: partial.total(),
        closed_form,
        tail_bound: tail,
    })
}

/// `e_{d,n}(x, x) - e_{d,n}(x, y)` for a sphere pair, assembled termwise as
/// `π^{-(d-1)/2} Σ_{k+2ℓ=n} B_d(ℓ) [h_k(R)² - h_k(x̂) h_k(ŷ)]`. On the unit
/// sphere with `r ≤ 1` the bracket is `Ω_k(s)`.
pub fn diagonal_gap(n: usize, pair: SpherePair) -> Result<f64> {
    let d = pair.dimension();
    let hc = hat_coords(pair);
    let hr = hermite_batch(n, pair.radius())?;
    let hx = hermite_batch(n, hc.x_hat)?;
    let hy = hermite_batch(n, hc.y_hat)?;
    let b = bd_weights(d, n / 2)?;
    let sum: NeumaierSum = (0..=n / 2)
        .map(|ell| {
            let k = n - 2 * ell;
            b[ell] * (hr.get(k) * hr.get(k) - hx.get(k) * hy.get(k))
        })
        .collect();
    Ok(prefactor(d) * sum.total())
}

/// `Ω_k(s) = h_k(1)² - h_k(sqrt(1-s)) h_k(sqrt(1+s))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaEval {
    pub k: usize,
    pub s: f64,
    pub value: f64,
}

/// Evaluates `Ω_k(s)` for `s ∈ [0, √3/2]`.
pub fn omega(k: usize, s: f64) -> Result<OmegaEval> {
    ensure_finite(s, "s")?;
    if !(0.0..=S_MAX).contains(&s) {
        return Err(Error::Domain {
            param: "s",
            value: s,
            expected: "0 <= s <= sqrt(3)/2",
        });
    }
    Ok(OmegaEval {
        k,
        s,
        value: omega_raw(k, s)?,
    })
}

/// `Ω_k(s)` without range check; even in `s` on `(-1, 1)`.
pub(crate) fn omega_raw(k: usize, s: f64) -> Result<f64> {
    if k == 0 {
        return Ok(0.0);
    }
    let one = hermite_batch(k, 1.0)?.get(k);
    let lo = hermite_batch(k, libm::sqrt(1.0 - s))?.get(k);
    let hi = hermite_batch(k, libm::sqrt(1.0 + s))?.get(k);
    Ok(one * one - lo * hi)
}

/// `Ω_k''(0) = (1/2) sqrt(2k) [sqrt(2k)(h_k(1)² + h_{k-1}(1)²) - h_{k-1}(1) h_k(1)]`.
pub fn omega_second_deriv_zero(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain {
            param: "k",
            value: 0.0,
            expected: "k >= 1",
        });
    }
    let h = hermite_batch(k, 1.0)?;
    let (hk, hk1) = (h.get(k), h.get(k - 1));
    let root = libm::sqrt(2.0 * k as f64);
    Ok(0.5 * root * (root * (hk * hk + hk1 * hk1) - hk1 * hk))
}

/// One row of a [`SpectralProfile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub r: f64,
    pub exact: f64,
    pub bessel1: f64,
    pub bessel2: f64,
    pub err1: f64,
    pub err2: f64,
}

impl ProfileRow {
    /// All value columns divided by `scale`.
    pub fn scaled(&self, scale: f64) -> Self {
        Self {
            r: self.r,
            exact: self.exact / scale,
            bessel1: self.bessel1 / scale,
            bessel2: self.bessel2 / scale,
            err1: self.err1 / scale,
            err2: self.err2 / scale,
        }
    }
}

/// Number of chord values in the default profile grid.
pub const PROFILE_POINTS: usize = 201;

/// `count` equispaced chord values on `[lo, hi]`.
pub fn chord_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Exact spectral function and its Bessel approximations tabulated along
/// chord distances on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    pub dimension: u32,
    pub level: usize,
    pub rows: Vec<ProfileRow>,
}

/// Computes one profile row at chord `r ∈ [0, 1]` of the unit sphere.
pub fn profile_row(d: u32, n: usize, r: f64) -> Result<ProfileRow> {
    let pair = SpherePair::unit(d, r)?;
    let exact = spectral_at(n, pair)?;
    let bessel1 = bessel_approx(d, n, r)?;
    let bessel2 = two_term_approx(n, pair)?;
    Ok(ProfileRow {
        r,
        exact,
        bessel1,
        bessel2,
        err1: (exact - bessel1).abs(),
        err2: (exact - bessel2).abs(),
    })
}

impl SpectralProfile {
    /// Profile over the given chord values.
    pub fn on_grid(d: u32, n: usize, grid: &[f64]) -> Result<Self> {
        let rows = grid
            .iter()
            .map(|&r| profile_row(d, n, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rows(d, n, rows))
    }

    /// Profile over [`PROFILE_POINTS`] equispaced chords in `[0, 1]`.
    pub fn compute(d: u32, n: usize) -> Result<Self> {
        Self::on_grid(d, n, &chord_grid(0.0, 1.0, PROFILE_POINTS))
    }

    pub fn from_rows(dimension: u32, level: usize, rows: Vec<ProfileRow>) -> Self {
        Self {
            dimension,
            level,
            rows,
        }
    }

    /// The profile with every value column divided by `n^{d/2-1}`.
    pub fn normalized(&self) -> Self {
        let scale = libm::pow(self.level.max(1) as f64, self.dimension as f64 / 2.0 - 1.0);
        Self {
            rows: self.rows.iter().map(|row| row.scaled(scale)).collect(),
            ..self.clone()
        }
    }

    pub fn sup_err1(&self) -> f64 {
        self.rows.iter().map(|r| r.err1).fold(0.0, f64::max)
    }

    pub fn sup_err2(&self) -> f64 {
        self.rows.iter().map(|r| r.err2).fold(0.0, f64::max)
    }
}

/// `e_{d,0}(x, x)` on a sphere of radius `R`: `π^{-d/2} e^{-R²}`.
pub fn ground_state_diagonal(d: u32, radius: f64) -> f64 {
    libm::pow(PI_POW_MINUS_QUARTER, 2.0 * d as f64) * libm::exp(-radius * radius)
}
