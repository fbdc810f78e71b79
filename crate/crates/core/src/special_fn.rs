//! One-dimensional special functions: normalized Hermite functions, the
//! normalized Bessel functions `J̃_{d/2-1}`, the binomial weights `B_d(ℓ)` and
//! eigenspace dimensions.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ensure_finite, Error, Result};
use crate::quad::{refine_composite, GaussLegendre, PANEL_ORDER};

/// `π^{-1/4}`.
pub const PI_POW_MINUS_QUARTER: f64 = 0.751_125_544_464_942_5;

/// `h_0(x), …, h_{n_max}(x)` at a single point, where
/// `h_n(x) = H_n(x) e^{-x²/2} / sqrt(n! 2^n sqrt(π))` is `L²(ℝ)`-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteBatch {
    point: f64,
    values: Vec<f64>,
}

impl HermiteBatch {
    pub fn point(&self) -> f64 {
        self.point
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `h_k(x)`.
    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Evaluates `h_0(x), …, h_{n_max}(x)` by the normalized three-term recurrence
///
/// `h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}`.
///
/// The raw Hermite polynomials are never formed, so nothing overflows for
/// `|x| ≤ 10` and `n_max ≤ 10^4`. Deep in the forbidden region (`|x| ≳ 38`)
/// the seed `h_0` underflows and the values are returned as zeros.
pub fn hermite_batch(n_max: usize, x: f64) -> Result<HermiteBatch> {
    ensure_finite(x, "x")?;
    let mut values = Vec::with_capacity(n_max + 1);
    let h0 = PI_POW_MINUS_QUARTER * libm::exp(-0.5 * x * x);
    values.push(h0);
    if n_max >= 1 {
        values.push(core::f64::consts::SQRT_2 * x * h0);
    }
    for k in 1..n_max {
        let kf = k as f64;
        let next = libm::sqrt(2.0 / (kf + 1.0)) * x * values[k]
            - libm::sqrt(kf / (kf + 1.0)) * values[k - 1];
        values.push(next);
    }
    Ok(HermiteBatch { point: x, values })
}

/// `h_n(x)` alone.
pub fn hermite(n: usize, x: f64) -> Result<f64> {
    Ok(hermite_batch(n, x)?.values[n])
}

/// `h_n'(x) = sqrt(2n) h_{n-1}(x) - x h_n(x)`, with `h_{-1} ≡ 0`.
pub fn hermite_deriv(n: usize, x: f64) -> Result<f64> {
    let batch = hermite_batch(n, x)?;
    Ok(deriv_from_batch(&batch, n))
}

pub(crate) fn deriv_from_batch(batch: &HermiteBatch, n: usize) -> f64 {
    let x = batch.point;
    let lower = if n == 0 { 0.0 } else { batch.values[n - 1] };
    libm::sqrt(2.0 * n as f64) * lower - x * batch.values[n]
}

/// Bessel order attached to a dimension `d ≥ 2`: `ν = d/2 - 1` and the
/// weight exponent `β = (d-3)/2 = ν - 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder {
    dimension: u32,
}

impl BesselOrder {
    pub fn new(dimension: u32) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain {
                param: "d",
                value: dimension as f64,
                expected: "d >= 2",
            });
        }
        Ok(Self { dimension })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn order(&self) -> f64 {
        self.dimension as f64 / 2.0 - 1.0
    }

    pub fn beta(&self) -> f64 {
        (self.dimension as f64 - 3.0) / 2.0
    }

    /// `J̃(0) = 1/Γ(d/2)`.
    pub fn value_at_zero(&self) -> f64 {
        1.0 / libm::tgamma(self.dimension as f64 / 2.0)
    }

    /// `sqrt(π) Γ((d-1)/2)`, the factor between `J̃` and its Poisson integral.
    pub fn poisson_normalizer(&self) -> f64 {
        libm::sqrt(PI) * libm::tgamma((self.dimension as f64 - 1.0) / 2.0)
    }
}

/// Agreement required between successive refinements of the Bessel quadrature.
pub const BESSEL_TOLERANCE: f64 = 1e-11;

/// Node budget for an oscillation scale `u`: `max(40, ceil(4 (1 + u)))`.
pub(crate) fn bessel_node_count(u: f64) -> usize {
    let n = libm::ceil(4.0 * (1.0 + u));
    (n as usize).max(40)
}

/// `∫_{-π/2}^{π/2} cos(α sin φ) cos^{power} φ dφ`, which equals
/// `∫_{-1}^{1} cos(α t)(1-t²)^β dt` for `power = 2β + 1 ≥ 0`.
///
/// Composite Gauss–Legendre starting from [`bessel_node_count`] nodes,
/// doubled until two refinements agree to `tol`.
pub(crate) fn sine_substituted_integral(alpha: f64, power: f64, tol: f64) -> crate::quad::Refined {
    let rule = GaussLegendre::new(PANEL_ORDER);
    let panels = bessel_node_count(alpha).div_ceil(PANEL_ORDER);
    let integer_power = power == libm::round(power) && power <= 64.0;
    refine_composite(&rule, -FRAC_PI_2, FRAC_PI_2, panels, tol, 12, |phi| {
        let c = libm::cos(phi).max(0.0);
        let weight = if integer_power {
            int_pow(c, power as u32)
        } else {
            libm::pow(c, power)
        };
        libm::cos(alpha * libm::sin(phi)) * weight
    })
}

/// `x^k` by repeated squaring.
pub(crate) fn int_pow(mut x: f64, mut k: u32) -> f64 {
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc *= x;
        }
        x *= x;
        k >>= 1;
    }
    acc
}

/// The normalized Bessel function
/// `J̃_{d/2-1}(u) = (2/u)^{d/2-1} J_{d/2-1}(u)`, evaluated through
///
/// `J̃_{d/2-1}(u) = (1 / (sqrt(π) Γ((d-1)/2))) ∫_{-1}^{1} cos(ut)(1-t²)^{(d-3)/2} dt`
///
/// after the substitution `t = sin φ`. Continuous at `u = 0` with value
/// `1/Γ(d/2)`.
pub fn normalized_bessel(ord: BesselOrder, u: f64) -> Result<f64> {
    ensure_finite(u, "u")?;
    if u < 0.0 {
        return Err(Error::Domain {
            param: "u",
            value: u,
            expected: "u >= 0",
        });
    }
    let norm = ord.poisson_normalizer();
    let power = ord.dimension as f64 - 2.0;
    let r = sine_substituted_integral(u, power, BESSEL_TOLERANCE * norm);
    Ok(r.value / norm)
}

/// `J_0(t)`, i.e. `J̃_0` for `d = 2`.
pub fn bessel_j0(t: f64) -> Result<f64> {
    normalized_bessel(BesselOrder { dimension: 2 }, t.abs())
}

/// `B_d(ℓ) = Γ((d-1)/2 + ℓ) / (ℓ! Γ((d-1)/2))`, by the multiplicative
/// recurrence `B_d(ℓ) = B_d(ℓ-1) ((d-1)/2 + ℓ - 1) / ℓ`.
pub fn bd_weight(d: u32, ell: usize) -> Result<f64> {
    Ok(*bd_weights(d, ell)?.last().expect("non-empty"))
}

/// `B_d(0), …, B_d(ell_max)`.
pub fn bd_weights(d: u32, ell_max: usize) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::Domain {
            param: "d",
            value: d as f64,
            expected: "d >= 2",
        });
    }
    let half = (d as f64 - 1.0) / 2.0;
    let mut out = Vec::with_capacity(ell_max + 1);
    let mut b = 1.0;
    out.push(b);
    for ell in 1..=ell_max {
        let l = ell as f64;
        b *= (half + l - 1.0) / l;
        out.push(b);
    }
    Ok(out)
}

/// `dim E_n = binomial(n + d - 1, d - 1)`, the number of multi-indices of
/// length `d` summing to `n`.
pub fn eigenspace_dim(d: u32, n: u64) -> Result<u64> {
    if d < 1 {
        return Err(Error::Domain {
            param: "d",
            value: d as f64,
            expected: "d >= 1",
        });
    }
    // binomial(n + k, k) built as a product of exact partial binomials.
    let k = (d - 1) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc
            .checked_mul(n + i)
            .ok_or(Error::Overflow("eigenspace dimension"))?
            / i;
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("eigenspace dimension"))
}

/// `dim E_n` as a float, for normalizations.
pub(crate) fn eigenspace_dim_f64(d: u32, n: usize) -> f64 {
    match eigenspace_dim(d, n as u64) {
        Ok(v) => v as f64,
        Err(_) => {
            let mut acc = 1.0;
            for i in 1..d {
                acc *= (n as f64 + i as f64) / i as f64;
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::NeumaierSum;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn ground_state_values() {
        assert!((hermite(0, 0.0).unwrap() - PI_POW_MINUS_QUARTER).abs() < 1e-16);
        assert!((PI_POW_MINUS_QUARTER - libm::pow(PI, -0.25)).abs() < 1e-16);
        assert_eq!(hermite(1, 0.0).unwrap(), 0.0);
        let b = hermite_batch(5, 1.3).unwrap();
        assert!(rel(b.get(0), libm::pow(PI, -0.25) * libm::exp(-0.845)) < 1e-14);
    }

    #[test]
    fn recurrence_residual_is_small() {
        for &x in &[-7.5, -1.0, 0.0, 0.3, 2.0, 9.9] {
            let b = hermite_batch(3000, x).unwrap();
            let v = b.values();
            for k in 1..3000 {
                let kf = k as f64;
                let pred = libm::sqrt(2.0 / (kf + 1.0)) * x * v[k]
                    - libm::sqrt(kf / (kf + 1.0)) * v[k - 1];
                assert!((v[k + 1] - pred).abs() <= 1e-12 * v[k].abs().max(1.0));
            }
        }
    }

    #[test]
    fn matches_explicit_polynomials() {
        // H_2 = 4x² - 2, H_3 = 8x³ - 12x.
        let x: f64 = 0.7;
        let g = libm::exp(-x * x / 2.0) * libm::pow(PI, -0.25);
        let h2 = (4.0 * x * x - 2.0) * g / libm::sqrt(8.0);
        let h3 = (8.0 * x * x * x - 12.0 * x) * g / libm::sqrt(48.0);
        let b = hermite_batch(3, x).unwrap();
        assert!(rel(b.get(2), h2) < 1e-14);
        assert!(rel(b.get(3), h3) < 1e-14);
    }

    #[test]
    fn no_overflow_at_large_index() {
        for &x in &[-10.0, 0.0, 10.0] {
            let b = hermite_batch(10_000, x).unwrap();
            assert!(b.values().iter().all(|v| v.is_finite()));
            assert!(b.get(10_000).abs() < 1.0);
        }
    }

    #[test]
    fn rejects_non_finite_points() {
        assert_eq!(hermite_batch(3, f64::NAN), Err(Error::NonFinite("x")));
        assert!(hermite_batch(3, f64::INFINITY).is_err());
    }

    #[test]
    fn derivative_closed_forms() {
        let e = libm::exp(-0.5);
        assert!(rel(hermite_deriv(0, 1.0).unwrap(), -PI_POW_MINUS_QUARTER * e) < 1e-14);
        assert!(rel(hermite_deriv(1, 0.0).unwrap(), libm::sqrt(2.0) * PI_POW_MINUS_QUARTER) < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        let fd = (hermite(50, 0.3 + h).unwrap() - hermite(50, 0.3 - h).unwrap()) / (2.0 * h);
        let d = hermite_deriv(50, 0.3).unwrap();
        assert!(rel(d, fd) < 1e-6, "{d} vs {fd}");
    }

    #[test]
    fn orthonormal_on_wide_interval() {
        let rule = GaussLegendre::new(PANEL_ORDER);
        let panels = 80;
        let nodes: Vec<(f64, f64)> = {
            let h = 40.0 / panels as f64;
            let mut v = Vec::new();
            for p in 0..panels {
                let lo = -20.0 + h * p as f64;
                for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                    v.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
                }
            }
            v
        };
        let batches: Vec<Vec<f64>> = nodes
            .iter()
            .map(|&(x, _)| hermite_batch(60, x).unwrap().into_values())
            .collect();
        for m in 0..=60 {
            for n in m..=60 {
                let s: NeumaierSum = nodes
                    .iter()
                    .zip(&batches)
                    .map(|(&(_, w), b)| w * b[m] * b[n])
                    .collect();
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((s.total() - expect).abs() < 1e-8, "({m},{n}) -> {}", s.total());
            }
        }
    }

    #[test]
    fn first_asymptotic_with_fitted_constant() {
        // K fitted over n in [50, 150], then checked at n = 200.
        let asym = |n: usize, s: f64| {
            let nf = n as f64;
            libm::pow(2.0, 0.25) / (libm::sqrt(PI) * libm::pow(nf, 0.25))
                * libm::cos(s * libm::sqrt(2.0 * nf) - nf * PI / 2.0)
        };
        let b = hermite_batch(200, 0.5).unwrap();
        let k = (50..=150)
            .map(|n| (b.get(n) - asym(n, 0.5)).abs() * libm::pow(n as f64, 0.75))
            .fold(0.0, f64::max);
        let resid = (b.get(200) - asym(200, 0.5)).abs();
        assert!(resid <= 2.0 * k * libm::pow(200.0, -0.75), "{resid} vs K={k}");
    }

    #[test]
    fn pair_law_with_single_constant() {
        let grid: Vec<f64> = (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect();
        let batches: Vec<HermiteBatch> = grid.iter().map(|&s| hermite_batch(2000, s).unwrap()).collect();
        let resid = |n: usize| {
            batches
                .iter()
                .map(|b| {
                    let v = b.get(n - 1).powi(2) + b.get(n).powi(2);
                    (v - core::f64::consts::SQRT_2 / (PI * libm::sqrt(n as f64))).abs()
                })
                .fold(0.0, f64::max)
        };
        let k = (50..=200).map(|n| resid(n) * n as f64).fold(0.0, f64::max);
        for n in (200..=2000).step_by(37) {
            assert!(resid(n) <= 2.0 * k / n as f64, "n={n}: {} vs K={k}", resid(n));
        }
    }

    #[test]
    fn product_asymptotic_decays() {
        let pts: Vec<f64> = (0..=12).map(|i| -1.5 + 0.25 * i as f64).collect();
        let batches: Vec<HermiteBatch> = pts.iter().map(|&s| hermite_batch(3200, s).unwrap()).collect();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut n = 100;
        while n <= 1600 {
            // envelope over a factor-2 window
            let mut worst: f64 = 0.0;
            for m in (n..2 * n).step_by(7) {
                let mf = m as f64;
                let sq = libm::sqrt(2.0 * mf);
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                for (i, bs) in batches.iter().enumerate() {
                    for (j, bt) in batches.iter().enumerate() {
                        let (s, t) = (pts[i], pts[j]);
                        let asym = (libm::cos((s - t) * sq) + sign * libm::cos((s + t) * sq))
                            / (PI * sq);
                        worst = worst.max((bs.get(m) * bt.get(m) - asym).abs());
                    }
                }
            }
            xs.push(libm::log(n as f64));
            ys.push(libm::log(worst));
            n *= 2;
        }
        let fit = crate::verify::ExponentFit::from_logs(&xs, &ys).unwrap();
        assert!(fit.slope <= -0.9, "slope {}", fit.slope);
    }

    #[test]
    fn bessel_at_zero_and_closed_form() {
        let d2 = BesselOrder::new(2).unwrap();
        assert!((normalized_bessel(d2, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let d3 = BesselOrder::new(3).unwrap();
        for &u in &[0.5, 1.0, 5.0] {
            let closed = 2.0 * libm::sin(u) / (libm::sqrt(PI) * u);
            assert!((normalized_bessel(d3, u).unwrap() - closed).abs() < 1e-10);
        }
        for d in 2..=7 {
            let o = BesselOrder::new(d).unwrap();
            let v = normalized_bessel(o, 0.0).unwrap();
            assert!((v - o.value_at_zero()).abs() < 1e-13, "d={d}");
        }
    }

    #[test]
    fn j0_against_series() {
        // J_0(t) = Σ (-1)^m (t/2)^{2m} / (m!)²
        for &t in &[0.1, 1.0, 2.404_825_557_695_773, 7.0, 12.5] {
            let mut term = 1.0;
            let mut sum = 1.0;
            for m in 1..80 {
                term *= -(t / 2.0) * (t / 2.0) / (m as f64 * m as f64);
                sum += term;
            }
            assert!((bessel_j0(t).unwrap() - sum).abs() < 1e-11, "t={t}");
        }
    }

    #[test]
    fn bessel_self_convergence() {
        let rule = GaussLegendre::new(PANEL_ORDER);
        for d in [2u32, 3, 4, 5] {
            let o = BesselOrder::new(d).unwrap();
            for &u in &[0.0, 0.7, 13.0, 95.0] {
                let v = normalized_bessel(o, u).unwrap();
                let panels = 4 * bessel_node_count(u).div_ceil(PANEL_ORDER);
                let fine = rule.integrate_composite(-FRAC_PI_2, FRAC_PI_2, panels, |p| {
                    libm::cos(u * libm::sin(p)) * libm::cos(p).powi(d as i32 - 2)
                }) / o.poisson_normalizer();
                assert!((v - fine).abs() < 1e-11, "d={d} u={u}");
            }
        }
    }

    #[test]
    fn bessel_rejects_negative_argument() {
        let o = BesselOrder::new(3).unwrap();
        assert!(matches!(normalized_bessel(o, -1.0), Err(Error::Domain { .. })));
        assert!(BesselOrder::new(1).is_err());
    }

    #[test]
    fn j0_band() {
        for i in 1..=500 {
            let t = 50.0 * i as f64 / 500.0;
            let ratio = (1.0 - bessel_j0(t).unwrap()) / t.min(1.0).powi(2);
            assert!((0.2..=1.5).contains(&ratio), "t={t}: {ratio}");
        }
    }

    #[test]
    fn binomial_weights() {
        for d in 2..=10 {
            assert_eq!(bd_weight(d, 0).unwrap(), 1.0);
        }
        for ell in 0..200 {
            assert!((bd_weight(3, ell).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((bd_weight(2, 1).unwrap() - 0.5).abs() < 1e-16);
        // Γ(3/2 + ℓ)/(ℓ! Γ(3/2)) against lgamma for d = 4
        for ell in [1usize, 5, 40] {
            let l = ell as f64;
            let expect = libm::exp(libm::lgamma(1.5 + l) - libm::lgamma(l + 1.0) - libm::lgamma(1.5));
            assert!(rel(bd_weight(4, ell).unwrap(), expect) < 1e-12);
        }
        assert!(bd_weight(1, 3).is_err());
        let big = bd_weight(10, 1_000_000).unwrap();
        assert!(big.is_finite() && big > 0.0);
    }

    #[test]
    fn binomial_weight_asymptotic() {
        for d in [2u32, 4, 5, 8] {
            let w = bd_weights(d, 20_000).unwrap();
            let g = libm::tgamma((d as f64 - 1.0) / 2.0);
            let err = |ell: usize| {
                let asym = libm::pow(ell as f64, (d as f64 - 3.0) / 2.0) / g;
                (w[ell] / asym - 1.0).abs()
            };
            let c = (10..1000).map(|l| err(l) * l as f64).fold(0.0, f64::max);
            for ell in (1000..=20_000).step_by(311) {
                assert!(err(ell) <= c / ell as f64 * 1.01, "d={d} ell={ell}");
            }
        }
    }

    #[test]
    fn dimensions() {
        for n in 0..50 {
            assert_eq!(eigenspace_dim(1, n).unwrap(), 1);
        }
        let count = (0..=5u32)
            .flat_map(|i| (0..=5u32).map(move |j| (i, j)))
            .filter(|(i, j)| i + j == 5)
            .count() as u64;
        assert_eq!(eigenspace_dim(2, 5).unwrap(), count);
        assert_eq!(eigenspace_dim(3, 4).unwrap(), 15);
        for d in 2..=6u32 {
            let n = 10_000u64;
            let fact: f64 = (1..d).map(|i| i as f64).product();
            let ratio = eigenspace_dim(d, n).unwrap() as f64 / libm::pow(n as f64, d as f64 - 1.0);
            assert!((ratio * fact - 1.0).abs() < 0.01, "d={d}");
        }
        assert!(matches!(eigenspace_dim(40, u64::MAX / 2), Err(Error::Overflow(_))));
        assert!(eigenspace_dim(0, 3).is_err());
    }
}
