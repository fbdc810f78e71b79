//! Asymptotics verification: log-log exponent fits, the oscillatory integral
//! `∫_{-1}^{1} cos(αt)(1-t²)^β dt`, sum-versus-integral comparisons over
//! `k + 2ℓ = n`, and the estimate suite for the spectral function on the
//! unit sphere.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::SpherePair;
use crate::quad::{refine_composite, GaussLegendre, NeumaierSum, PANEL_ORDER};
use crate::special_fn::{normalized_bessel, sine_substituted_integral, BesselOrder};
use crate::spectral::{bessel_scale, diagonal_gap, spectral_at};

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub sample_count: usize,
}

/// Smallest sample accepted by [`ExponentFit`].
pub const MIN_FIT_SAMPLES: usize = 4;

impl ExponentFit {
    /// Fit on already logarithmic data.
    pub fn from_logs(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::DimensionMismatch {
                left: xs.len(),
                right: ys.len(),
            });
        }
        if xs.len() < MIN_FIT_SAMPLES {
            return Err(Error::Domain {
                param: "sample_count",
                value: xs.len() as f64,
                expected: "at least 4 samples",
            });
        }
        for (x, y) in xs.iter().zip(ys) {
            ensure_finite(*x, "log x")?;
            ensure_finite(*y, "log y")?;
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        if sxx <= 0.0 {
            return Err(Error::Domain {
                param: "x spread",
                value: 0.0,
                expected: "distinct abscissae",
            });
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| {
                let r = y - (intercept + slope * x);
                r * r
            })
            .sum();
        Ok(Self {
            slope,
            intercept,
            residual_rms: libm::sqrt(ss / n),
            sample_count: xs.len(),
        })
    }

    /// Fit of `y ≈ C x^slope` on positive data.
    pub fn fit(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let lx: Vec<f64> = xs.iter().map(|v| libm::log(*v)).collect();
        let ly: Vec<f64> = ys.iter().map(|v| libm::log(*v)).collect();
        Self::from_logs(&lx, &ly)
    }

    /// Fit through the upper envelope: the data are grouped into factor-2
    /// bins of `x` and only the largest `y` of each bin is kept.
    pub fn envelope(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let (ex, ey) = envelope_points(xs, ys)?;
        Self::fit(&ex, &ey)
    }

    /// `C x^slope`.
    pub fn predict(&self, x: f64) -> f64 {
        libm::exp(self.intercept + self.slope * libm::log(x))
    }
}

/// Per-bin maxima used by [`ExponentFit::envelope`].
pub fn envelope_points(xs: &[f64], ys: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let x0 = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    if x0.is_nan() || x0 <= 0.0 {
        return Err(Error::Domain {
            param: "x",
            value: x0,
            expected: "x > 0",
        });
    }
    let mut bins: Vec<(i64, f64, f64)> = Vec::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let b = libm::floor(libm::log2(x / x0) + 1e-12) as i64;
        match bins.iter_mut().find(|e| e.0 == b) {
            Some(e) if y > e.2 => {
                e.1 = x;
                e.2 = y;
            }
            Some(_) => {}
            None => bins.push((b, x, y)),
        }
    }
    bins.sort_by_key(|e| e.0);
    Ok((
        bins.iter().map(|e| e.1).collect(),
        bins.iter().map(|e| e.2).collect(),
    ))
}

/// An oscillatory integral with the change of its last refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscValue {
    pub value: f64,
    pub change: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    ensure_finite(beta, "beta")?;
    if beta <= -1.0 {
        return Err(Error::Domain {
            param: "beta",
            value: beta,
            expected: "beta > -1",
        });
    }
    Ok(())
}

/// `√π Γ(β+1) / Γ(β+3/2)`, the value of the oscillatory integral at `α = 0`.
pub fn osc_at_zero(beta: f64) -> f64 {
    libm::sqrt(PI) * libm::exp(libm::lgamma(beta + 1.0) - libm::lgamma(beta + 1.5))
}

/// [`osc_integral`] with its self-convergence change.
pub fn osc_integral_refined(alpha: f64, beta: f64) -> Result<OscValue> {
    ensure_finite(alpha, "alpha")?;
    check_beta(beta)?;
    let alpha = alpha.abs();
    let tol = 1e-12 * osc_at_zero(beta).max(1.0);
    if beta >= -0.5 {
        let r = sine_substituted_integral(alpha, 2.0 * beta + 1.0, tol);
        return Ok(OscValue {
            value: r.value,
            change: r.change,
        });
    }
    // Endpoint layers [1-w, 1] in u = (1-t)^{β+1}; the middle part is smooth.
    let w = 0.5f64.min(1.0 / alpha.max(2.0));
    let rule = GaussLegendre::new(PANEL_ORDER);
    let panels = libm::ceil((1.0 + alpha) / 4.0 + 1.0 / w) as usize;
    let middle = refine_composite(&rule, 0.0, 1.0 - w, panels, tol, 14, |t| {
        libm::cos(alpha * t) * libm::pow(1.0 - t * t, beta)
    });
    let e = beta + 1.0;
    let k = 1.0 / e;
    let layer_panels = libm::ceil(1.0 + alpha * w) as usize;
    let layer = refine_composite(&rule, 0.0, libm::pow(w, e), layer_panels, tol, 14, |u| {
        let v = libm::pow(u, k);
        libm::cos(alpha * (1.0 - v)) * libm::pow(2.0 - v, beta)
    });
    Ok(OscValue {
        value: 2.0 * (middle.value + layer.value / e),
        change: 2.0 * (middle.change + layer.change / e),
    })
}

/// `∫_{-1}^{1} cos(αt)(1-t²)^β dt` for `β > -1`.
///
/// For `β ≥ -1/2` the substitution `t = sin φ` removes the endpoint
/// singularity. Below, endpoint layers of width `min(1/2, 1/max(α, 2))` are
/// integrated in `u = (1-t)^{β+1}`.
pub fn osc_integral(alpha: f64, beta: f64) -> Result<f64> {
    Ok(osc_integral_refined(alpha, beta)?.value)
}

/// Sup of `|osc(α, β)| / osc(0, β)` over a range of `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionFactor {
    pub value: f64,
    pub argmax: f64,
    pub alpha_hi: f64,
}

/// `ε(α_0, β) = sup_{α_0 ≤ α ≤ α_hi} |osc(α, β)| / osc(0, β)` with
/// `α_hi = max(100 α_0, 1000)`, from a grid of step `1/4` refined by golden
/// section around every local maximum. For `β ≥ -1/2` the scan stops once a
/// decreasing majorant of `|osc|` falls below the running maximum.
pub fn contraction_factor(alpha0: f64, beta: f64) -> Result<ContractionFactor> {
    ensure_finite(alpha0, "alpha0")?;
    check_beta(beta)?;
    if alpha0 <= 0.0 {
        return Err(Error::Domain {
            param: "alpha0",
            value: alpha0,
            expected: "alpha0 > 0",
        });
    }
    let alpha_hi = (100.0 * alpha0).max(1000.0);
    let norm = osc_at_zero(beta);
    let f = |a: f64| -> Result<f64> { Ok(osc_integral(a, beta)?.abs() / norm) };
    let step = 0.25;
    let count = libm::ceil((alpha_hi - alpha0) / step) as usize;
    let at = |i: usize| (alpha0 + step * i as f64).min(alpha_hi);
    let mut best = (f(alpha0)?, alpha0);
    let (mut prev, mut cur) = (f64::NEG_INFINITY, best.0);
    for i in 0..=count {
        let a = at(i);
        if beta >= -0.5 && landau_envelope(a, beta) / norm < best.0 {
            break;
        }
        let next = if i < count { f(at(i + 1))? } else { f64::NEG_INFINITY };
        // sampling at step 1/4 sees at least 95% of any peak of |cos|
        if cur >= prev && cur >= next && cur >= 0.95 * best.0 {
            let lo = at(i.saturating_sub(1));
            let hi = at((i + 1).min(count));
            let (v, x) = golden_max(&f, lo, hi)?;
            let (v, x) = if cur > v { (cur, a) } else { (v, x) };
            if v > best.0 {
                best = (v, x);
            }
        }
        prev = cur;
        cur = next;
    }
    Ok(ContractionFactor {
        value: best.0,
        argmax: best.1,
        alpha_hi,
    })
}

/// Upper bound for `|osc(α, β)|`, `β ≥ -1/2`, from
/// `osc(α, β) = √π Γ(β+1) (2/α)^{β+1/2} J_{β+1/2}(α)` and Landau's uniform
/// bound `|J_ν(x)| ≤ 0.7858 x^{-1/3}` for `ν ≥ 0`. Decreasing in `α`.
fn landau_envelope(alpha: f64, beta: f64) -> f64 {
    libm::sqrt(PI)
        * libm::tgamma(beta + 1.0)
        * libm::pow(2.0 / alpha, beta + 0.5)
        * 0.7858
        * libm::pow(alpha, -1.0 / 3.0)
}

fn golden_max(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..40 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd { (fc, c) } else { (fd, d) })
}

/// The function `F` in the sum-versus-integral comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumFunction {
    Cos,
    One,
}

/// Both sides of the comparison and their distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerMaclaurin {
    pub sum: f64,
    pub scaled_integral: f64,
    pub discrepancy: f64,
}

/// `Σ_{k+2ℓ=n, k,ℓ≥1} F(a√k) ℓ^β / √k` against
/// `n^{β+1/2} / 2^{β+1} ∫_0^1 F(a√(nt)) (1-t)^β dt/√t`. The integral equals
/// `osc(a√n, β)` after `t = u²`.
pub fn euler_maclaurin_check(n: usize, a: f64, beta: f64, f: SumFunction) -> Result<EulerMaclaurin> {
    ensure_finite(a, "a")?;
    ensure_finite(beta, "beta")?;
    if n < 4 {
        return Err(Error::Domain {
            param: "n",
            value: n as f64,
            expected: "n >= 4",
        });
    }
    if beta < -0.5 || a < 0.0 {
        return Err(Error::Domain {
            param: "beta",
            value: beta,
            expected: "beta >= -1/2 and a >= 0",
        });
    }
    let sum = em_sum(n, a, beta, f, false);
    let alpha = match f {
        SumFunction::Cos => a * libm::sqrt(n as f64),
        SumFunction::One => 0.0,
    };
    let nf = n as f64;
    let scaled_integral =
        libm::pow(nf, beta + 0.5) / libm::pow(2.0, beta + 1.0) * osc_integral(alpha, beta)?;
    Ok(EulerMaclaurin {
        sum,
        scaled_integral,
        discrepancy: (sum - scaled_integral).abs(),
    })
}

fn em_sum(n: usize, a: f64, beta: f64, f: SumFunction, reverse: bool) -> f64 {
    let term = |ell: usize| {
        let k = (n - 2 * ell) as f64;
        let fv = match f {
            SumFunction::Cos => libm::cos(a * libm::sqrt(k)),
            SumFunction::One => 1.0,
        };
        fv * libm::pow(ell as f64, beta) / libm::sqrt(k)
    };
    let last = (n - 1) / 2;
    let s: NeumaierSum = if reverse {
        (1..=last).rev().map(term).collect()
    } else {
        (1..=last).map(term).collect()
    };
    s.total()
}

/// Measured quantities of the estimate suite at one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop14Row {
    pub n: usize,
    /// `sup_r |e_{d,m}/m^{d/2-1} - J̃(√(2m) r)/(2π)^{d/2}|`, max over `m ∈ {n, n+1}`.
    pub bessel_sup_error: f64,
    /// `max_{n ≤ m < 2n} |e_{d,m}(x,x)/m^{d/2-1} - 1/((2π)^{d/2} Γ(d/2))|`.
    pub diagonal_deviation: f64,
    /// Level at which `diagonal_deviation` is attained.
    pub diagonal_argmax: usize,
    /// `sup_{c/√n ≤ r ≤ 1} |e_{d,n}(x,y)| / e_{d,n}(x,x)`.
    pub far_ratio: f64,
    /// Range of `(e(x,x) - e(x,y)) / (n^{d/2} r²)` over `0 < r ≤ c/√n`.
    pub near_min: f64,
    pub near_max: f64,
}

/// The four estimates at a list of levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop14Report {
    pub dimension: u32,
    pub c: f64,
    pub rows: Vec<Prop14Row>,
    pub bessel_fit: ExponentFit,
    pub diagonal_fit: ExponentFit,
    pub far_max: f64,
    pub near_band: f64,
}

/// Points used for the near-diagonal band.
const NEAR_POINTS: usize = 20;

/// One row of the estimate suite.
pub fn prop14_row(d: u32, n: usize, rs: &[f64], c: f64) -> Result<Prop14Row> {
    let ord = BesselOrder::new(d)?;
    let mut bessel_sup_error: f64 = 0.0;
    for m in [n, n + 1] {
        let scale = libm::pow(m as f64, d as f64 / 2.0 - 1.0);
        let pref = bessel_scale(d, m) / scale;
        let root = libm::sqrt(2.0 * m as f64);
        for &r in rs {
            let e = spectral_at(m, SpherePair::unit(d, r)?)? / scale;
            let j = pref * normalized_bessel(ord, root * r)?;
            bessel_sup_error = bessel_sup_error.max((e - j).abs());
        }
    }
    let limit = bessel_scale(d, 1) * ord.value_at_zero();
    let diag_pair = SpherePair::unit(d, 0.0)?;
    let mut diagonal_deviation = -1.0;
    let mut diagonal_argmax = n;
    for m in n..(2 * n).max(n + 1) {
        let scale = libm::pow(m as f64, d as f64 / 2.0 - 1.0);
        let dev = (spectral_at(m, diag_pair)? / scale - limit).abs();
        if dev > diagonal_deviation {
            diagonal_deviation = dev;
            diagonal_argmax = m;
        }
    }
    let diag = spectral_at(n, diag_pair)?;
    let root_n = libm::sqrt(n as f64);
    let mut far_ratio: f64 = 0.0;
    for &r in rs.iter().filter(|&&r| r >= c / root_n && r <= 1.0) {
        far_ratio = far_ratio.max(spectral_at(n, SpherePair::unit(d, r)?)?.abs() / diag);
    }
    let r_near = (c / root_n).min(1.0);
    let norm = libm::pow(n as f64, d as f64 / 2.0);
    let mut near_min = f64::INFINITY;
    let mut near_max: f64 = 0.0;
    for i in 1..=NEAR_POINTS {
        let r = r_near * i as f64 / NEAR_POINTS as f64;
        let ratio = diagonal_gap(n, SpherePair::unit(d, r)?)? / (norm * r * r);
        near_min = near_min.min(ratio);
        near_max = near_max.max(ratio);
    }
    Ok(Prop14Row {
        n,
        bessel_sup_error,
        diagonal_deviation,
        diagonal_argmax,
        far_ratio,
        near_min,
        near_max,
    })
}

/// Assembles the report from rows computed by [`prop14_row`]. Each row is
/// already a window maximum, so the fits run directly on the rows.
pub fn prop14_report(d: u32, c: f64, rows: Vec<Prop14Row>) -> Result<Prop14Report> {
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let errs: Vec<f64> = rows.iter().map(|r| r.bessel_sup_error).collect();
    let bessel_fit = ExponentFit::fit(&ns, &errs)?;
    let dv: Vec<f64> = rows.iter().map(|r| r.diagonal_deviation).collect();
    let diagonal_fit = ExponentFit::fit(&ns, &dv)?;
    let far_max = rows.iter().map(|r| r.far_ratio).fold(0.0, f64::max);
    let lo = rows.iter().map(|r| r.near_min).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.near_max).fold(0.0, f64::max);
    Ok(Prop14Report {
        dimension: d,
        c,
        rows,
        bessel_fit,
        diagonal_fit,
        far_max,
        near_band: hi / lo,
    })
}

/// Runs the four estimates over the levels `ns` and chord grid `rs ⊂ [0, 1]`.
pub fn prop14_suite(d: u32, ns: &[usize], rs: &[f64], c: f64) -> Result<Prop14Report> {
    let rows = ns
        .iter()
        .map(|&n| prop14_row(d, n, rs, c))
        .collect::<Result<Vec<_>>>()?;
    prop14_report(d, c, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::chord_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fit_recovers_synthetic_slope() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (1..=40).map(|i| 10.0 * i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 3.0 * libm::pow(*x, -1.5) * (1.0 + 0.01 * rng.random_range(-1.0..1.0)))
            .collect();
        let fit = ExponentFit::fit(&xs, &ys).unwrap();
        assert!((fit.slope + 1.5).abs() < 0.05);
        assert!((libm::exp(fit.intercept) - 3.0).abs() < 0.1);
        assert!(fit.residual_rms < 0.01);
        assert_eq!(fit.sample_count, 40);
        assert!(ExponentFit::fit(&xs[..3], &ys[..3]).is_err());
    }

    #[test]
    fn envelope_ignores_zeros() {
        let xs: Vec<f64> = (10..2000).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| libm::pow(*x, -0.75) * libm::sin(*x).abs() + 1e-300)
            .collect();
        let fit = ExponentFit::envelope(&xs, &ys).unwrap();
        assert!((fit.slope + 0.75).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn osc_closed_forms() {
        for &alpha in &[0.3, 1.0, 7.5, 40.0, 320.0] {
            let want = 2.0 * libm::sin(alpha) / alpha;
            assert!((osc_integral(alpha, 0.0).unwrap() - want).abs() < 1e-10);
        }
        assert!((osc_integral(0.0, 0.0).unwrap() - 2.0).abs() < 1e-14);
        for &beta in &[-0.9, -0.75, -0.6, -0.5, 0.25, 1.5, 3.0] {
            let got = osc_integral(0.0, beta).unwrap();
            assert!((got - osc_at_zero(beta)).abs() < 1e-9 * osc_at_zero(beta), "beta={beta}");
        }
        assert!(osc_integral(1.0, -1.0).is_err());
    }

    #[test]
    fn osc_matches_bessel() {
        for d in 2..=7u32 {
            let ord = BesselOrder::new(d).unwrap();
            for &alpha in &[0.0, 0.5, 3.0, 17.0, 120.0] {
                let osc = osc_integral(alpha, ord.beta()).unwrap();
                let want = ord.poisson_normalizer() * normalized_bessel(ord, alpha).unwrap();
                assert!((osc - want).abs() < 1e-9, "d={d} alpha={alpha}");
            }
        }
    }

    #[test]
    fn osc_self_convergence() {
        for &alpha in &[0.0, 2.0, 30.0, 250.0] {
            for &beta in &[-0.5, 0.0, 0.5, 1.5] {
                assert!(osc_integral_refined(alpha, beta).unwrap().change < 1e-10);
            }
            for &beta in &[-0.9, -0.75, -0.6] {
                let v = osc_integral_refined(alpha, beta).unwrap();
                assert!(v.change < 1e-7, "alpha={alpha} beta={beta}: {v:?}");
            }
        }
    }

    #[test]
    fn endpoint_branch_continuity() {
        for &alpha in &[0.0, 1.0, 10.0, 100.0] {
            let below = osc_integral(alpha, -0.5 - 1e-9).unwrap();
            let at = osc_integral(alpha, -0.5).unwrap();
            assert!((below - at).abs() < 1e-6, "alpha={alpha}: {below} vs {at}");
        }
    }

    #[test]
    fn osc_decay_rate() {
        for &beta in &[0.5, 1.5] {
            let alphas: Vec<f64> = (0..240).map(|i| 10.0 * libm::pow(2.0, 6.0 * i as f64 / 240.0)).collect();
            let vals: Vec<f64> = alphas.iter().map(|&a| osc_integral(a, beta).unwrap().abs()).collect();
            let fit = ExponentFit::envelope(&alphas, &vals).unwrap();
            assert!((fit.slope + 1.0 + beta).abs() <= 0.15, "beta={beta}: {fit:?}");
        }
    }

    #[test]
    fn contraction_below_one() {
        let big = contraction_factor(200.0, 0.0).unwrap();
        assert!(big.value < 0.01);
        for &a0 in &[0.5, 1.0, 2.0] {
            for &beta in &[-0.5, 0.0, 0.5, 1.5] {
                let cf = contraction_factor(a0, beta).unwrap();
                assert!(cf.value < 1.0 && cf.value > 0.0, "a0={a0} beta={beta}: {cf:?}");
            }
        }
        let j0 = contraction_factor(2.0, -0.5).unwrap();
        assert!((j0.argmax - 3.8317).abs() < 1e-3, "{j0:?}");
    }

    #[test]
    fn em_one_beta_zero() {
        for n in [16usize, 64, 257, 1024] {
            let r = euler_maclaurin_check(n, 0.0, 0.0, SumFunction::One).unwrap();
            assert!((r.scaled_integral - libm::sqrt(n as f64)).abs() < 1e-12 * libm::sqrt(n as f64));
            assert!(r.discrepancy < 2.0 * libm::log(n as f64));
            let cos0 = euler_maclaurin_check(n, 0.0, 0.0, SumFunction::Cos).unwrap();
            assert!((cos0.sum - r.sum).abs() < 1e-12);
        }
    }

    #[test]
    fn em_spot_check() {
        let forward = euler_maclaurin_check(64, 0.0, 0.0, SumFunction::One).unwrap().sum;
        let backward = em_sum(64, 0.0, 0.0, SumFunction::One, true);
        let by_index: f64 = (1..=31).map(|j| 1.0 / libm::sqrt(j as f64)).sum::<f64>() / libm::sqrt(2.0);
        assert!((forward - backward).abs() < 1e-12);
        assert!((forward - by_index).abs() < 1e-12);
    }

    #[test]
    fn em_rate() {
        let ns: Vec<f64> = (6..=13).map(|k| libm::pow(2.0, k as f64)).collect();
        let disc: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let r = euler_maclaurin_check(n as usize, 1.5, 0.5, SumFunction::Cos).unwrap();
                r.discrepancy / libm::log(n)
            })
            .collect();
        let fit = ExponentFit::envelope(&ns, &disc).unwrap();
        assert!(fit.slope <= 0.75, "{fit:?}");
        assert!(euler_maclaurin_check(3, 1.0, 0.0, SumFunction::Cos).is_err());
    }

    #[test]
    fn prop14_small_run() {
        let rs = chord_grid(0.0, 1.0, 41);
        let report = prop14_suite(3, &[60, 120, 240, 480], &rs, 2.0).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.bessel_fit.slope < -0.3, "{:?}", report.bessel_fit);
        assert!(report.far_max < 1.0);
        assert!(report.near_band < 10.0);
    }
}
