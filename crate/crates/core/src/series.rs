//! Bracketed sums and integrals of power-log sequences
//! `g(x) = x^{-p} (ln(1+x))^{-q}` on `x ≥ 1`.
//!
//! Long ranges are summed through the trapezoid form of the integral test:
//! once `g` has constant convexity on `[m, b]`,
//!
//! `Σ_{n=m}^{b} g(n) = ∫_m^b g + (g(m) + g(b))/2 + E`,
//! with `E` between `0` and `(g'(b) - g'(m))/8`.

use crate::quad::{GaussLegendre, NeumaierSum};

/// A closed interval `[lower, upper]` known to contain a quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            lower: a.min(b),
            upper: a.max(b),
        }
    }

    pub fn exact(v: f64) -> Self {
        Self { lower: v, upper: v }
    }

    pub fn infinite() -> Self {
        Self {
            lower: f64::INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn mid(&self) -> f64 {
        if self.lower == self.upper {
            self.lower
        } else {
            0.5 * (self.lower + self.upper)
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_finite(&self) -> bool {
        self.upper.is_finite()
    }

    /// Membership with a relative slack for round-off.
    pub fn contains(&self, v: f64, rel_slack: f64) -> bool {
        let slack = rel_slack * v.abs().max(self.upper.abs());
        v >= self.lower - slack && v <= self.upper + slack
    }

    pub fn shift(self, v: f64) -> Self {
        Self {
            lower: self.lower + v,
            upper: self.upper + v,
        }
    }

    /// Image under a nondecreasing map.
    pub fn map_monotone(self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            lower: f(self.lower),
            upper: f(self.upper),
        }
    }

    /// Product with a nonnegative factor.
    pub fn scale(self, c: f64) -> Self {
        Self {
            lower: self.lower * c,
            upper: self.upper * c,
        }
    }
}

impl core::ops::Add for Bracket {
    type Output = Bracket;

    fn add(self, other: Bracket) -> Bracket {
        Bracket {
            lower: self.lower + other.lower,
            upper: self.upper + other.upper,
        }
    }
}

/// Number of leading terms summed exactly before the integral test applies.
pub const EXACT_TERMS: u64 = 4096;

/// Largest exact prefix tolerated while waiting for constant convexity.
pub const MAX_EXACT_TERMS: u64 = 10_000_000;

/// `g(x) = x^{-p} (ln(1+x))^{-q}` for `x ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLog {
    pub p: f64,
    pub q: f64,
}

impl PowerLog {
    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q }
    }

    pub fn ln_value(&self, x: f64) -> f64 {
        let mut v = 0.0;
        if self.p != 0.0 {
            v -= self.p * libm::log(x);
        }
        if self.q != 0.0 {
            v -= self.q * libm::log(libm::log1p(x));
        }
        v
    }

    pub fn value(&self, x: f64) -> f64 {
        libm::exp(self.ln_value(x))
    }

    /// `(ln g)'(x)`.
    fn dlog(&self, x: f64) -> f64 {
        -self.p / x - self.q / ((1.0 + x) * libm::log1p(x))
    }

    /// `g'(x)`.
    pub fn deriv(&self, x: f64) -> f64 {
        self.value(x) * self.dlog(x)
    }

    /// Sign of `g''(x)`, i.e. of `(ln g)'' + (ln g)'²`.
    fn curvature(&self, x: f64) -> f64 {
        let l = libm::log1p(x);
        let xp = 1.0 + x;
        let second = self.p / (x * x) + self.q / (xp * xp * l) + self.q / (xp * xp * l * l);
        let first = self.dlog(x);
        second + first * first
    }

    /// A point beyond which `g''` keeps a constant sign, located on a
    /// geometric scan up to `1e15`.
    pub fn convex_from(&self) -> f64 {
        let mut x = 1.0;
        let mut last_sign = self.curvature(1.0) >= 0.0;
        let mut start = 1.0;
        while x < 1e15 {
            let next = x * 1.05;
            let sign = self.curvature(next) >= 0.0;
            if sign != last_sign {
                start = next;
                last_sign = sign;
            }
            x = next;
        }
        start
    }

    /// Whether `Σ_{n≥1} g(n)` is finite.
    pub fn summable(&self) -> bool {
        self.p > 1.0 + P_EQ_TOL || (is_one(self.p) && self.q > 1.0)
    }

    /// `∫_a^b g` for `1 ≤ a ≤ b < ∞`, in the variable `u = ln x`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let (ua, ub) = (libm::log(a), libm::log(b));
        let width = 1.0 / (1.0 + (1.0 - self.p).abs());
        let panels = (libm::ceil((ub - ua) / width) as usize).clamp(1, 1_000_000);
        let rule = GaussLegendre::new(16);
        rule.integrate_composite(ua, ub, panels, |u| self.u_integrand(u))
    }

    /// `g(e^u) e^u`.
    fn u_integrand(&self, u: f64) -> f64 {
        let ln_l = if u > 40.0 {
            libm::log(u + libm::log1p(libm::exp(-u)))
        } else {
            libm::log(libm::log1p(libm::exp(u)))
        };
        libm::exp((1.0 - self.p) * u - self.q * ln_l)
    }

    /// `∫_a^∞ g`, or `None` when it diverges.
    pub fn tail_integral(&self, a: f64) -> Option<Bracket> {
        if !self.summable() {
            return None;
        }
        let ua = libm::log(a);
        if is_one(self.p) {
            let span = 40.0;
            let head = GaussLegendre::new(16).integrate_composite(ua, ua + span, 40, |u| self.u_integrand(u));
            // ln(1+x) lies between ln x and ln x + 1/x on [A, ∞)
            let (big, ub) = (a * libm::exp(span), ua + span);
            let e = self.q - 1.0;
            let slow = libm::pow(ub, -e) / e;
            let fast = libm::pow(ub + 1.0 / big, -e) / e;
            return Some(Bracket::new(fast, slow).shift(head));
        }
        let lambda = self.p - 1.0;
        let width = 1.0 / (1.0 + lambda);
        let rule = GaussLegendre::new(16);
        let mut total = NeumaierSum::default();
        let mut lo = ua;
        for _ in 0..10_000_000usize {
            let hi = lo + width;
            let piece = rule.integrate(lo, hi, |u| self.u_integrand(u));
            total.add(piece);
            let decreasing = self.u_integrand(hi) <= self.u_integrand(lo);
            if decreasing && piece <= 1e-18 * total.total() {
                break;
            }
            lo = hi;
        }
        Some(Bracket::exact(total.total()))
    }

    /// First point from which the trapezoid bracket is valid, given a start.
    fn bracket_start(&self, a: u64) -> Option<u64> {
        let c = libm::ceil(self.convex_from()) as u64;
        let m = a.saturating_add(EXACT_TERMS).max(c);
        (m - a <= MAX_EXACT_TERMS).then_some(m)
    }

    fn exact_sum(&self, a: u64, b: u64) -> f64 {
        let s: NeumaierSum = (a..=b).map(|n| self.value(n as f64)).collect();
        s.total()
    }

    /// `Σ_{n=m}^{b} g(n)` by the trapezoid bracket alone; `m ≥` [`convex_from`](Self::convex_from)
    /// and `m ≤ b` are the caller's responsibility.
    pub fn trapezoid_range(&self, m: f64, b: f64) -> Bracket {
        let base = self.integral(m, b) + 0.5 * (self.value(m) + self.value(b));
        let e = (self.deriv(b) - self.deriv(m)) / 8.0;
        Bracket::new(base, base + e)
    }

    /// `Σ_{n≥m} g(n)` by the trapezoid bracket alone, for an integer-valued
    /// `m ≥` [`convex_from`](Self::convex_from); `None` when it diverges.
    pub fn trapezoid_tail(&self, m: f64) -> Option<Bracket> {
        let tail = self.tail_integral(m)?;
        let e = -self.deriv(m) / 8.0;
        Some(tail.shift(0.5 * self.value(m)) + Bracket::new(0.0, e))
    }

    /// `Σ_{n=a}^{b} g(n)` for `1 ≤ a`, bracketed. `b` may exceed the exact
    /// integer range of `u64` when given as a float.
    pub fn range_sum(&self, a: u64, b: f64) -> Option<Bracket> {
        let a = a.max(1);
        if b < a as f64 {
            return Some(Bracket::exact(0.0));
        }
        let m = self.bracket_start(a)?;
        if b < m as f64 {
            return Some(Bracket::exact(self.exact_sum(a, b as u64)));
        }
        let head = if m > a { self.exact_sum(a, m - 1) } else { 0.0 };
        Some(self.trapezoid_range(m as f64, b).shift(head))
    }

    /// `Σ_{n≥a} g(n)`, or `None` when it diverges or cannot be bracketed.
    pub fn tail_sum(&self, a: u64) -> Option<Bracket> {
        let a = a.max(1);
        let m = self.bracket_start(a)?;
        let head = if m > a { self.exact_sum(a, m - 1) } else { 0.0 };
        Some(self.trapezoid_tail(m as f64)?.shift(head))
    }
}

const P_EQ_TOL: f64 = 1e-12;

fn is_one(p: f64) -> bool {
    (p - 1.0).abs() <= P_EQ_TOL
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_closed_forms() {
        let g = PowerLog::new(2.0, 0.0);
        assert!((g.integral(1.0, 10.0) - 0.9).abs() < 1e-13);
        let g = PowerLog::new(0.0, 0.0);
        assert!((g.integral(3.0, 7.5) - 4.5).abs() < 1e-12);
        let t = PowerLog::new(3.0, 0.0).tail_integral(2.0).unwrap();
        assert!((t.mid() - 0.125).abs() < 1e-14);
    }

    #[test]
    fn tail_sum_of_inverse_squares() {
        let g = PowerLog::new(2.0, 0.0);
        let zeta2 = core::f64::consts::PI * core::f64::consts::PI / 6.0;
        let t = g.tail_sum(1).unwrap();
        assert!(t.contains(zeta2, 1e-14), "{t:?}");
        assert!(t.width() < 1e-10);
        let t5 = g.tail_sum(5).unwrap();
        let head = 1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0;
        assert!(t5.contains(zeta2 - head, 1e-13));
    }

    #[test]
    fn range_sum_matches_direct() {
        for &(p, q) in &[(1.5, 0.7), (-0.5, 1.0), (0.5, -2.0), (1.0, 2.0)] {
            let g = PowerLog::new(p, q);
            let direct: f64 = (3..=60_000u64).map(|n| g.value(n as f64)).sum();
            let br = g.range_sum(3, 60_000.0).unwrap();
            assert!(br.contains(direct, 1e-12), "p={p} q={q}: {br:?} vs {direct}");
            assert!(br.width() <= 1e-9 * direct.abs());
        }
    }

    #[test]
    fn borderline_tail_brackets_refine() {
        let g = PowerLog::new(1.0, 3.0);
        let coarse = g.tail_sum(10).unwrap();
        let extra: f64 = (10..20_000u64).map(|n| g.value(n as f64)).sum();
        let fine = g.tail_sum(20_000).unwrap().shift(extra);
        assert!(fine.lower >= coarse.lower - 1e-12 && fine.upper <= coarse.upper + 1e-12);
    }

    #[test]
    fn summability() {
        assert!(PowerLog::new(1.01, -3.0).summable());
        assert!(PowerLog::new(1.0, 1.5).summable());
        assert!(!PowerLog::new(1.0, 1.0).summable());
        assert!(!PowerLog::new(0.9, 10.0).summable());
        assert!(PowerLog::new(1.0, 1.0).tail_sum(2).is_none());
    }

    #[test]
    fn bracket_arithmetic() {
        let b = Bracket::new(2.0, 1.0);
        assert_eq!(b.lower, 1.0);
        assert_eq!((b + Bracket::exact(1.0)).upper, 3.0);
        assert_eq!(b.map_monotone(libm::sqrt).upper, libm::sqrt(2.0));
        assert!(b.contains(1.5, 0.0) && !b.contains(2.5, 0.0));
    }
}
