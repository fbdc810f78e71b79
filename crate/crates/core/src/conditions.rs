//! Convergence conditions of the random series: the Salem–Zygmund sum
//! `Σ_{ℓ≥2} (ℓ sqrt(ln ℓ))^{-1} T(ℓ)^{1/2}`, the `L^p` sum
//! `Σ_{ℓ≥1} ℓ^{d/2-1} T(ℓ)^{p/2}` with `T(ℓ) = Σ_{n≥ℓ} ‖f_n‖² n^{-d/2}`,
//! the function `Υ_θ(t) = sqrt(Σ_n c_n min(1, n^θ t)²)`, the entropic
//! integral `∫_0^1 Υ_θ(t) dt / (t sqrt(-ln t))` and the tails
//! `U_p(θ) = Σ_{1≤n<⌊p^{1/θ}⌋} n^{2θ} c_n`, `V_p(θ) = Σ_{n≥⌊p^{1/θ}⌋} c_n`.
//!
//! Law sequences are handled through bracketed integral-test sums, so every
//! partial value comes with a rigorous `[lower, upper]` enclosure.

use alloc::vec::Vec;

use crate::dudley::CoefficientSequence;
use crate::error::{ensure_finite, Error, Result};
use crate::quad::{GaussLegendre, NeumaierSum};
use crate::series::{Bracket, PowerLog};
use crate::verify::ExponentFit;

/// Outcome of a convergence test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converging,
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Converging => "converging",
            Self::Diverging => "diverging",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// Nonnegative weights `w_n` indexed by `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSequence {
    /// `values[n] = w_n`; index `0` is ignored and weights vanish beyond the end.
    Explicit(Vec<f64>),
    /// `w_n = g(n)` for `n ≥ n0`, zero below.
    Law { g: PowerLog, n0: u64 },
}

impl WeightSequence {
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        for v in &values {
            ensure_finite(*v, "w_n")?;
            if *v < 0.0 {
                return Err(Error::Domain {
                    param: "w_n",
                    value: *v,
                    expected: "w_n >= 0",
                });
            }
        }
        Ok(Self::Explicit(values))
    }

    /// `w_n = n^{-p} (ln(n+1))^{-q}` for `n ≥ n0`.
    pub fn law(p: f64, q: f64, n0: u64) -> Result<Self> {
        ensure_finite(p, "p")?;
        ensure_finite(q, "q")?;
        Ok(Self::Law {
            g: PowerLog::new(p, q),
            n0: n0.max(1),
        })
    }

    pub fn zero() -> Self {
        Self::Explicit(Vec::new())
    }

    /// `w_n = c(n)² n^{-d/2}`, the weights inside `T(ℓ)`.
    pub fn from_coefficients(d: u32, coeffs: &CoefficientSequence) -> Self {
        let half = d as f64 / 2.0;
        match coeffs {
            CoefficientSequence::Explicit(v) => Self::Explicit(
                v.iter()
                    .enumerate()
                    .map(|(n, c)| if n == 0 { 0.0 } else { c * c * libm::pow(n as f64, -half) })
                    .collect(),
            ),
            CoefficientSequence::PowerLog { a, b, n0 } => Self::Law {
                g: PowerLog::new(2.0 * a + half, 2.0 * b),
                n0: (*n0).max(1),
            },
        }
    }

    pub fn value(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match self {
            Self::Explicit(v) => v.get(n as usize).copied().unwrap_or(0.0),
            Self::Law { g, n0 } => {
                if n < *n0 {
                    0.0
                } else {
                    g.value(n as f64)
                }
            }
        }
    }

    pub fn summable(&self) -> bool {
        match self {
            Self::Explicit(_) => true,
            Self::Law { g, .. } => g.summable(),
        }
    }

    fn start(&self) -> u64 {
        match self {
            Self::Explicit(_) => 1,
            Self::Law { n0, .. } => *n0,
        }
    }

    /// `n^{2θ} w_n` as a law, for law sequences.
    fn lifted(&self, theta: f64) -> Option<PowerLog> {
        match self {
            Self::Explicit(_) => None,
            Self::Law { g, .. } => Some(PowerLog::new(g.p - 2.0 * theta, g.q)),
        }
    }
}

/// Largest exact suffix table built by [`Tails`].
pub const MAX_TAIL_CUT: u64 = 1 << 24;

/// Bracketed tails `Σ_{k≥n} w_k`, exact up to a cut and by the integral
/// test beyond it.
#[derive(Debug, Clone)]
pub struct Tails {
    weights: WeightSequence,
    cut: u64,
    suffix: Vec<f64>,
    far: Option<Bracket>,
    convex_start: f64,
}

impl Tails {
    /// Exact suffix sums for `n ≤ cut` (law sequences) or over the whole
    /// support (explicit sequences).
    pub fn new(weights: &WeightSequence, cut: u64) -> Result<Self> {
        let cut = match weights {
            WeightSequence::Explicit(v) => v.len().saturating_sub(1) as u64,
            WeightSequence::Law { .. } => cut.max(1),
        };
        if cut > MAX_TAIL_CUT {
            return Err(Error::SizeGuard {
                needed: cut,
                limit: MAX_TAIL_CUT,
            });
        }
        let mut suffix = alloc::vec![0.0; cut as usize + 2];
        let mut acc = NeumaierSum::default();
        for n in (1..=cut).rev() {
            acc.add(weights.value(n));
            suffix[n as usize] = acc.total();
        }
        suffix[0] = suffix[1];
        let (far, convex_start) = match weights {
            WeightSequence::Explicit(_) => (Some(Bracket::exact(0.0)), 1.0),
            WeightSequence::Law { g, n0 } => {
                let far = if g.summable() {
                    g.tail_sum((cut + 1).max(*n0))
                } else {
                    None
                };
                (far, g.convex_from())
            }
        };
        Ok(Self {
            weights: weights.clone(),
            cut,
            suffix,
            far,
            convex_start,
        })
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn cut(&self) -> u64 {
        self.cut
    }

    /// `Σ_{n≥1} w_n`.
    pub fn total(&self) -> Option<Bracket> {
        self.tail(1)
    }

    /// `Σ_{k≥n} w_k`, or `None` when the series diverges or cannot be bracketed.
    pub fn tail(&self, n: u64) -> Option<Bracket> {
        let n = n.max(1);
        if n <= self.cut {
            return self.far.map(|f| f.shift(self.suffix[n as usize]));
        }
        match &self.weights {
            WeightSequence::Explicit(_) => Some(Bracket::exact(0.0)),
            WeightSequence::Law { g, n0 } => {
                let m = n.max(*n0);
                if m as f64 >= self.convex_start {
                    g.trapezoid_tail(m as f64)
                } else {
                    g.tail_sum(m)
                }
            }
        }
    }

    /// [`tail`](Self::tail) at an integer-valued float, which may exceed `u64`.
    pub fn tail_real(&self, n: f64) -> Option<Bracket> {
        if n < 1e18 {
            return self.tail(n.max(1.0) as u64);
        }
        match &self.weights {
            WeightSequence::Explicit(_) => Some(Bracket::exact(0.0)),
            WeightSequence::Law { g, .. } => {
                if n >= self.convex_start {
                    g.trapezoid_tail(n)
                } else {
                    None
                }
            }
        }
    }
}

/// Partial values of a condition over a cutoff grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// `(L, bracket of the partial sum up to L)`, nondecreasing in `L`.
    pub partial_sums: Vec<(u64, Bracket)>,
    pub verdict: Verdict,
    /// Fit of the partial sums against `L` over the last three decades.
    pub growth_fit: Option<ExponentFit>,
    /// Whether the last decade increases the partial sum by at most `1e-3`
    /// relative.
    pub cauchy: bool,
    pub reason: Option<&'static str>,
}

impl ConditionReport {
    fn inconclusive(verdict: Verdict, reason: &'static str) -> Self {
        Self {
            partial_sums: Vec::new(),
            verdict,
            growth_fit: None,
            cauchy: false,
            reason: Some(reason),
        }
    }

    pub fn last(&self) -> Option<Bracket> {
        self.partial_sums.last().map(|p| p.1)
    }
}

/// Relative last-decade increment accepted by the Cauchy test.
pub const CAUCHY_TOLERANCE: f64 = 1e-3;

/// Largest cutoff accepted by the condition sums.
pub const MAX_CUTOFF: u64 = 100_000_000;

/// Powers of two from `start`, plus `L/10` and `L`.
pub fn cutoff_grid(start: u64, l_max: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = (0..64)
        .map(|k| 1u64 << k)
        .filter(|c| *c >= start && *c <= l_max)
        .collect();
    grid.push((l_max / 10).max(start));
    grid.push(l_max);
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Sums `term(ℓ, T(ℓ))` over `start ≤ ℓ ≤ l_max`, recording the grid.
fn accumulate(
    tails: &Tails,
    start: u64,
    l_max: u64,
    term: impl Fn(u64, Bracket) -> Bracket,
) -> Option<Vec<(u64, Bracket)>> {
    let grid = cutoff_grid(start, l_max);
    let mut lower = NeumaierSum::default();
    let mut upper = NeumaierSum::default();
    let mut out = Vec::with_capacity(grid.len());
    let mut next = 0;
    let zero_beyond = matches!(tails.weights(), WeightSequence::Explicit(_));
    for ell in start..=l_max {
        if zero_beyond && ell > tails.cut() {
            break;
        }
        let t = term(ell, tails.tail(ell)?);
        lower.add(t.lower);
        upper.add(t.upper);
        while next < grid.len() && grid[next] == ell {
            out.push((ell, Bracket::new(lower.total(), upper.total())));
            next += 1;
        }
    }
    let fin = Bracket::new(lower.total(), upper.total());
    for &c in &grid[next..] {
        out.push((c, fin));
    }
    Some(out)
}

fn finish(partial_sums: Vec<(u64, Bracket)>, verdict: Verdict) -> ConditionReport {
    let l_max = partial_sums.last().map_or(0, |p| p.0);
    let value_at = |c: u64| partial_sums.iter().find(|p| p.0 == c).map(|p| p.1.mid());
    let last = value_at(l_max).unwrap_or(0.0);
    let decade = value_at((l_max / 10).max(partial_sums[0].0)).unwrap_or(0.0);
    let cauchy = last == 0.0 || (last - decade) <= CAUCHY_TOLERANCE * last;
    let tail: Vec<&(u64, Bracket)> = partial_sums
        .iter()
        .filter(|p| p.0 * 1000 >= l_max && p.1.mid() > 0.0)
        .collect();
    let xs: Vec<f64> = tail.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1.mid()).collect();
    let growth_fit = ExponentFit::fit(&xs, &ys).ok();
    ConditionReport {
        partial_sums,
        verdict,
        growth_fit,
        cauchy,
        reason: None,
    }
}

const EXPONENT_TOL: f64 = 1e-12;

/// Integral-test verdict for `Σ_{ℓ≥2} ℓ^{-1} (ln ℓ)^{-1/2} T(ℓ)^{1/2}` when
/// `T` is the tail of `n^{-P} (ln n)^{-q}`.
pub fn sz_law_verdict(g: PowerLog) -> Verdict {
    if !g.summable() {
        return Verdict::Diverging;
    }
    if g.p > 1.0 + EXPONENT_TOL || g.q > 2.0 {
        Verdict::Converging
    } else {
        Verdict::Diverging
    }
}

/// Integral-test verdict for `Σ_{ℓ≥1} ℓ^{d/2-1} T(ℓ)^{p/2}`, same `T`.
pub fn lp_law_verdict(d: u32, p: f64, g: PowerLog) -> Verdict {
    if !g.summable() {
        return Verdict::Diverging;
    }
    let e = d as f64 / 2.0 - 1.0 + (1.0 - g.p) * p / 2.0;
    if e < -1.0 - EXPONENT_TOL || ((e + 1.0).abs() <= EXPONENT_TOL && g.q * p / 2.0 > 1.0) {
        Verdict::Converging
    } else {
        Verdict::Diverging
    }
}

fn check_cutoff(l_max: u64) -> Result<()> {
    if l_max > MAX_CUTOFF {
        return Err(Error::SizeGuard {
            needed: l_max,
            limit: MAX_CUTOFF,
        });
    }
    Ok(())
}

fn condition(
    d: u32,
    coeffs: &CoefficientSequence,
    start: u64,
    l_max: u64,
    law_verdict: impl Fn(PowerLog) -> Verdict,
    term: impl Fn(u64, Bracket) -> Bracket,
) -> Result<ConditionReport> {
    check_cutoff(l_max)?;
    let weights = WeightSequence::from_coefficients(d, coeffs);
    let verdict = match &weights {
        WeightSequence::Explicit(_) => Verdict::Converging,
        WeightSequence::Law { g, .. } => {
            if !g.summable() {
                return Ok(ConditionReport::inconclusive(
                    Verdict::Diverging,
                    "the tail series diverges",
                ));
            }
            law_verdict(*g)
        }
    };
    let l_max = l_max.max(start);
    let tails = Tails::new(&weights, l_max)?;
    match accumulate(&tails, start, l_max, term) {
        Some(partial) => Ok(finish(partial, verdict)),
        None => Ok(ConditionReport::inconclusive(
            Verdict::Inconclusive,
            "tail not computable",
        )),
    }
}

/// Salem–Zygmund condition up to the cutoff `L_max`.
pub fn sz_condition(d: u32, coeffs: &CoefficientSequence, l_max: u64) -> Result<ConditionReport> {
    condition(d, coeffs, 2, l_max, sz_law_verdict, |ell, t| {
        let l = ell as f64;
        t.map_monotone(libm::sqrt).scale(1.0 / (l * libm::sqrt(libm::log(l))))
    })
}

/// `L^p` condition up to the cutoff `L_max`, `p ≥ 1`.
pub fn lp_condition(d: u32, p: f64, coeffs: &CoefficientSequence, l_max: u64) -> Result<ConditionReport> {
    ensure_finite(p, "p")?;
    if p < 1.0 {
        return Err(Error::Domain {
            param: "p",
            value: p,
            expected: "p >= 1",
        });
    }
    let w = d as f64 / 2.0 - 1.0;
    condition(
        d,
        coeffs,
        1,
        l_max,
        |g| lp_law_verdict(d, p, g),
        |ell, t| t.map_monotone(|v| libm::pow(v, p / 2.0)).scale(libm::pow(ell as f64, w)),
    )
}

/// One block `[2^{2^ℓ}, 2^{2^{ℓ+1}})` of the condensed condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensedBlock {
    pub ell: u32,
    /// `Σ_{block} c(n)² n^{-d/2}`.
    pub mass: Bracket,
    /// `2^{ℓ/2} mass^{1/2}`.
    pub term: Bracket,
}

/// Condensed Salem–Zygmund sum over dyadic-exponent blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedReport {
    pub blocks: Vec<CondensedBlock>,
    pub total: Bracket,
    pub verdict: Verdict,
}

impl CondensedReport {
    /// `term_{ℓ+1} / term_ℓ` for the last two nonzero blocks.
    pub fn last_ratio(&self) -> Option<f64> {
        let nz: Vec<&CondensedBlock> = self.blocks.iter().filter(|b| b.term.mid() > 0.0).collect();
        let k = nz.len();
        (k >= 2).then(|| nz[k - 1].term.mid() / nz[k - 2].term.mid())
    }
}

/// Largest block index of [`sz_condensed`]; the last block ends at `2^64`.
pub const MAX_CONDENSED_BLOCK: u32 = 5;

/// `Σ_{ℓ ≤ ℓ_max} 2^{ℓ/2} (Σ_{2^{2^ℓ} ≤ n < 2^{2^{ℓ+1}}} c(n)² n^{-d/2})^{1/2}`.
pub fn sz_condensed(d: u32, coeffs: &CoefficientSequence, ell_max: u32) -> Result<CondensedReport> {
    if ell_max > MAX_CONDENSED_BLOCK {
        return Err(Error::SizeGuard {
            needed: ell_max as u64,
            limit: MAX_CONDENSED_BLOCK as u64,
        });
    }
    let weights = WeightSequence::from_coefficients(d, coeffs);
    let mut blocks = Vec::with_capacity(ell_max as usize + 1);
    let mut total = Bracket::exact(0.0);
    for ell in 0..=ell_max {
        let lo = 1u64 << (1u32 << ell);
        let hi = libm::ldexp(1.0, 1 << (ell + 1)) - 1.0;
        let mass = match &weights {
            WeightSequence::Explicit(v) => {
                let s: NeumaierSum = (lo..)
                    .take_while(|n| (*n as f64) <= hi && (*n as usize) < v.len())
                    .map(|n| weights.value(n))
                    .collect();
                Bracket::exact(s.total())
            }
            WeightSequence::Law { g, n0 } => g.range_sum(lo.max(*n0), hi).ok_or(Error::NotSummable)?,
        };
        let term = mass
            .map_monotone(libm::sqrt)
            .scale(libm::pow(2.0, ell as f64 / 2.0));
        total = total + term;
        blocks.push(CondensedBlock { ell, mass, term });
    }
    let verdict = match &weights {
        WeightSequence::Explicit(_) => Verdict::Converging,
        WeightSequence::Law { g, .. } => sz_law_verdict(*g),
    };
    Ok(CondensedReport { blocks, total, verdict })
}

/// `⌊x⌋`, snapping to the nearest integer within `1e-9` relative.
pub fn snapped_floor(x: f64) -> f64 {
    let r = libm::round(x);
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        libm::floor(x)
    }
}

/// `⌈x⌉` with the same snapping as [`snapped_floor`].
pub fn snapped_ceil(x: f64) -> f64 {
    let r = libm::round(x);
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        libm::ceil(x)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    ensure_finite(theta, "theta")?;
    if theta <= 0.0 {
        return Err(Error::Domain {
            param: "theta",
            value: theta,
            expected: "theta > 0",
        });
    }
    Ok(())
}

/// Sums `Σ_{1≤n<N} n^{2θ} w_n`.
#[derive(Debug, Clone)]
struct LiftedPrefix {
    prefix: Vec<f64>,
    lifted: Option<PowerLog>,
    convex_start: f64,
}

impl LiftedPrefix {
    fn new(weights: &WeightSequence, theta: f64, cut: u64) -> Self {
        let mut prefix = alloc::vec![0.0; cut as usize + 2];
        let mut acc = NeumaierSum::default();
        for n in 1..=cut {
            acc.add(libm::pow(n as f64, 2.0 * theta) * weights.value(n));
            prefix[n as usize + 1] = acc.total();
        }
        let lifted = weights.lifted(theta);
        let convex_start = lifted.map_or(1.0, |h| h.convex_from());
        Self {
            prefix,
            lifted,
            convex_start,
        }
    }

    fn cut(&self) -> u64 {
        self.prefix.len() as u64 - 2
    }

    /// `Σ_{1≤n<N}` for an integer-valued `N ≥ 1`.
    fn sum_below(&self, n: f64, start: u64) -> Option<Bracket> {
        let cut = self.cut();
        if n <= cut as f64 + 1.0 {
            return Some(Bracket::exact(self.prefix[n as usize]));
        }
        let head = self.prefix[cut as usize + 1];
        let Some(h) = self.lifted else {
            return Some(Bracket::exact(head));
        };
        let m = (cut + 1).max(start);
        if m as f64 > n - 1.0 {
            return Some(Bracket::exact(head));
        }
        let rest = if m as f64 >= self.convex_start {
            h.trapezoid_range(m as f64, n - 1.0)
        } else {
            h.range_sum(m, n - 1.0)?
        };
        Some(rest.shift(head))
    }
}

/// Cut of the exact tables behind [`Upsilon`].
pub const UPSILON_CUT: u64 = 1 << 16;

/// `Υ_θ(t)` with cached tables.
#[derive(Debug, Clone)]
pub struct Upsilon {
    theta: f64,
    tails: Tails,
    lifted: LiftedPrefix,
}

impl Upsilon {
    pub fn new(theta: f64, weights: &WeightSequence) -> Result<Self> {
        check_theta(theta)?;
        if !weights.summable() {
            return Err(Error::NotSummable);
        }
        let tails = Tails::new(weights, UPSILON_CUT)?;
        tails.total().ok_or(Error::NotSummable)?;
        let lifted = LiftedPrefix::new(weights, theta, tails.cut());
        Ok(Self { theta, tails, lifted })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn weights(&self) -> &WeightSequence {
        self.tails.weights()
    }

    /// `Σ_n w_n = Υ_θ(1)²`.
    pub fn total(&self) -> Bracket {
        self.tails.total().unwrap_or(Bracket::infinite())
    }

    /// First `n` with `n^θ t ≥ 1`, at `t = e^{-s}`.
    fn threshold(&self, s: f64) -> f64 {
        snapped_ceil(libm::exp(s / self.theta)).max(1.0)
    }

    /// `Υ_θ(e^{-s})²`, bracketed.
    pub fn squared_at_log(&self, s: f64) -> Bracket {
        let n = self.threshold(s);
        let v = self.tails.tail_real(n).unwrap_or(Bracket::infinite());
        let u = self
            .lifted
            .sum_below(n, self.tails.weights().start())
            .unwrap_or(Bracket::infinite());
        u.scale(libm::exp(-2.0 * s)) + v
    }

    /// `Υ_θ(t)` for `t ∈ [0, 1]`.
    pub fn value(&self, t: f64) -> Result<f64> {
        ensure_finite(t, "t")?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain {
                param: "t",
                value: t,
                expected: "0 <= t <= 1",
            });
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(libm::sqrt(self.squared_at_log(-libm::log(t)).mid()))
    }
}

/// `Υ_θ(t) = sqrt(Σ_{n≥1} c_n min(1, n^θ t)²)`.
pub fn upsilon(theta: f64, weights: &WeightSequence, t: f64) -> Result<f64> {
    Upsilon::new(theta, weights)?.value(t)
}

/// Convergence status of the entropic integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropicStatus {
    /// The estimated remaining mass is below the tolerance.
    Converged,
    /// Contributions decay, but too slowly to reach the tolerance before the cap.
    Unresolved,
    /// Contributions do not decay fast enough to be summable.
    Divergent,
}

/// Entropic integral with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropicIntegral {
    /// Integral over `t ∈ [2^{-J}, 1]`.
    pub value: f64,
    /// Estimated mass over `t < 2^{-J}`; infinite when divergence is detected.
    pub tail_bound: f64,
    /// Number `J` of dyadic subintervals used.
    pub panels: usize,
    pub status: EntropicStatus,
}

impl EntropicIntegral {
    pub fn converged(&self) -> bool {
        self.status == EntropicStatus::Converged
    }
}

/// Relative remaining mass at which the entropic integral stops.
pub const ENTROPIC_TOLERANCE: f64 = 1e-6;

/// Largest `ln n` at which `Υ_θ` is evaluated inside the entropic integral.
pub const ENTROPIC_LOG_CAP: f64 = 40.0;

/// Kinks of `Υ_θ` at `t = n^{-θ}` are resolved for `n` up to this index.
const KINK_LIMIT: u64 = 256;

const ENTROPIC_ORDER: usize = 32;

/// Estimate of `Σ_{k>j} C_k` from the contributions so far, combining a
/// geometric and an algebraic extrapolation; infinite when neither decays.
fn extrapolated_tail(c: &[f64]) -> f64 {
    let j = c.len() - 1;
    let last = c[j];
    if last == 0.0 {
        return 0.0;
    }
    let rho = last / c[j - 1];
    let half = c[j / 2];
    let kappa = libm::log(half / last) / libm::log((j as f64 + 1.0) / (j as f64 / 2.0 + 1.0));
    if rho.is_nan() || kappa.is_nan() || rho >= 1.0 || kappa <= 1.0 {
        return f64::INFINITY;
    }
    let geometric = last * rho / (1.0 - rho);
    let algebraic = last * (j as f64 + 1.0) / (kappa - 1.0);
    geometric.max(algebraic)
}

/// `∫_0^1 Υ_θ(t) dt / (t sqrt(-ln t))`, computed as `∫_0^∞ 2 Υ_θ(e^{-w²}) dw`
/// on the dyadic subintervals `t ∈ [2^{-(j+1)}, 2^{-j}]`, each by 32-node
/// Gauss–Legendre in `w = sqrt(-ln t)` split at the kinks `t = n^{-θ}`.
pub fn entropic_integral(theta: f64, weights: &WeightSequence) -> Result<EntropicIntegral> {
    let ups = Upsilon::new(theta, weights)?;
    let rule = GaussLegendre::new(ENTROPIC_ORDER);
    let ln2 = core::f64::consts::LN_2;
    let log_cap = ENTROPIC_LOG_CAP.min(600.0 / (2.0 * theta + 1.0));
    let j_max = ((theta * log_cap / ln2) as usize).max(8);
    let kinks: Vec<f64> = (2..=KINK_LIMIT)
        .filter(|n| weights.value(*n) > 0.0)
        .map(|n| theta * libm::log(n as f64))
        .collect();
    let integrand = |w: f64| 2.0 * libm::sqrt(ups.squared_at_log(w * w).mid().max(0.0));
    let mut contributions: Vec<f64> = Vec::new();
    let mut total = NeumaierSum::default();
    let mut tail = f64::INFINITY;
    for j in 0..j_max {
        let (s0, s1) = (j as f64 * ln2, (j + 1) as f64 * ln2);
        let mut cuts: Vec<f64> = alloc::vec![s0];
        cuts.extend(kinks.iter().copied().filter(|k| *k > s0 && *k < s1));
        cuts.push(s1);
        let piece: f64 = cuts
            .windows(2)
            .map(|w| rule.integrate(libm::sqrt(w[0]), libm::sqrt(w[1]), integrand))
            .sum();
        total.add(piece);
        contributions.push(piece);
        if j >= 4 {
            tail = extrapolated_tail(&contributions);
            if tail <= ENTROPIC_TOLERANCE * total.total() {
                return Ok(EntropicIntegral {
                    value: total.total(),
                    tail_bound: tail,
                    panels: j + 1,
                    status: EntropicStatus::Converged,
                });
            }
        }
    }
    let status = if tail.is_finite() {
        EntropicStatus::Unresolved
    } else {
        EntropicStatus::Divergent
    };
    Ok(EntropicIntegral {
        value: total.total(),
        tail_bound: tail,
        panels: j_max,
        status,
    })
}

/// `U_p(θ)` and `V_p(θ)` of a weight sequence.
#[derive(Debug, Clone, Copy)]
pub struct ThetaFamily<'a> {
    pub theta: f64,
    tails: &'a Tails,
}

impl<'a> ThetaFamily<'a> {
    pub fn new(theta: f64, tails: &'a Tails) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self { theta, tails })
    }

    /// `n* = ⌊p^{1/θ}⌋`.
    pub fn threshold(&self, p: f64) -> f64 {
        snapped_floor(libm::pow(p, 1.0 / self.theta)).max(1.0)
    }

    /// `V_p(θ) = Σ_{n≥n*} c_n`.
    pub fn v(&self, p: f64) -> Option<Bracket> {
        self.tails.tail_real(self.threshold(p))
    }

    /// `U_p(θ) = Σ_{1≤n<n*} n^{2θ} c_n`.
    pub fn u(&self, p: f64) -> Option<Bracket> {
        let top = self.threshold(p) - 1.0;
        let w = self.tails.weights();
        match w {
            WeightSequence::Explicit(v) => {
                let s: NeumaierSum = (1..v.len())
                    .take_while(|n| (*n as f64) <= top)
                    .map(|n| libm::pow(n as f64, 2.0 * self.theta) * v[n])
                    .collect();
                Some(Bracket::exact(s.total()))
            }
            WeightSequence::Law { n0, .. } => w.lifted(self.theta)?.range_sum(*n0, top),
        }
    }

    /// `Σ_{p≤P} sqrt(V_p(θ)) / (p sqrt(ln(p+1)))` on the grid of [`cutoff_grid`].
    pub fn sz_partial_sums(&self, p_max: u64) -> Option<Vec<(u64, Bracket)>> {
        let grid = cutoff_grid(1, p_max);
        let mut out = Vec::with_capacity(grid.len());
        let mut lower = NeumaierSum::default();
        let mut upper = NeumaierSum::default();
        let mut cached: Option<(f64, Bracket)> = None;
        let mut next = 0;
        for p in 1..=p_max {
            let pf = p as f64;
            let n = self.threshold(pf);
            let v = match cached {
                Some((m, v)) if m == n => v,
                _ => {
                    let v = self.tails.tail_real(n)?;
                    cached = Some((n, v));
                    v
                }
            };
            let scale = 1.0 / (pf * libm::sqrt(libm::log1p(pf)));
            lower.add(libm::sqrt(v.lower) * scale);
            upper.add(libm::sqrt(v.upper) * scale);
            while next < grid.len() && grid[next] == p {
                out.push((p, Bracket::new(lower.total(), upper.total())));
                next += 1;
            }
        }
        Some(out)
    }
}

/// One `θ` row of [`theta_independence_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaRow {
    pub theta: f64,
    pub partial_sums: Vec<(u64, Bracket)>,
    pub total: Bracket,
}

/// One check of `V_{2^{pT²}}(T) = V_{2^p}(1/T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VIdentity {
    pub t: u32,
    pub p: u32,
    pub lhs_start: f64,
    pub rhs_start: f64,
    pub lhs: Bracket,
    pub rhs: Bracket,
}

impl VIdentity {
    pub fn exact(&self) -> bool {
        self.lhs_start == self.rhs_start && self.lhs == self.rhs
    }
}

/// Salem–Zygmund sums across `θ` and the `V`-identity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaReport {
    pub rows: Vec<ThetaRow>,
    /// Largest pairwise ratio of the totals at `P = p_max`.
    pub max_ratio: f64,
    pub identities: Vec<VIdentity>,
}

impl ThetaReport {
    pub fn identities_exact(&self) -> bool {
        self.identities.iter().all(VIdentity::exact)
    }
}

/// Largest `p` of the `V`-identity checks, for `T ∈ {2, 3}`.
pub const IDENTITY_MAX_P: u32 = 6;

/// Salem–Zygmund sums `Σ_{p≤P} sqrt(V_p(θ)) / (p sqrt(ln(p+1)))` for each
/// `θ`, their pairwise ratios at `P = p_max`, and
/// `V_{2^{pT²}}(T) = V_{2^p}(1/T)` for `T ∈ {2, 3}`, `p ≤ 6`.
pub fn theta_independence_report(thetas: &[f64], weights: &WeightSequence, p_max: u64) -> Result<ThetaReport> {
    for &t in thetas {
        check_theta(t)?;
    }
    if !weights.summable() {
        return Err(Error::NotSummable);
    }
    check_cutoff(p_max)?;
    let theta_min = thetas.iter().copied().fold(1.0 / 3.0, f64::min);
    let need = libm::pow(p_max.max(64) as f64, 1.0 / theta_min);
    let cut = (need.min(MAX_TAIL_CUT as f64) as u64).max(1 << 18);
    let tails = Tails::new(weights, cut)?;
    let mut rows = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let fam = ThetaFamily::new(theta, &tails)?;
        let partial_sums = fam.sz_partial_sums(p_max).ok_or(Error::NotSummable)?;
        let total = partial_sums.last().map_or(Bracket::exact(0.0), |p| p.1);
        rows.push(ThetaRow {
            theta,
            partial_sums,
            total,
        });
    }
    let mut max_ratio: f64 = 1.0;
    for a in &rows {
        for b in &rows {
            if b.total.mid() > 0.0 {
                max_ratio = max_ratio.max(a.total.mid() / b.total.mid());
            }
        }
    }
    let mut identities = Vec::new();
    for t in [2u32, 3] {
        let big = ThetaFamily::new(t as f64, &tails)?;
        let small = ThetaFamily::new(1.0 / t as f64, &tails)?;
        for p in 0..=IDENTITY_MAX_P {
            let lp = libm::ldexp(1.0, (p * t * t) as i32);
            let rp = libm::ldexp(1.0, p as i32);
            identities.push(VIdentity {
                t,
                p,
                lhs_start: big.threshold(lp),
                rhs_start: small.threshold(rp),
                lhs: big.v(lp).ok_or(Error::NotSummable)?,
                rhs: small.v(rp).ok_or(Error::NotSummable)?,
            });
        }
    }
    Ok(ThetaReport {
        rows,
        max_ratio,
        identities,
    })
}

/// `Σ_{p≥1} (p sqrt(ln(p+1)))^{-1} sqrt(Σ_{n≥p} c_n)` truncated at `p_max`.
pub fn sz_weight_sum(weights: &WeightSequence, p_max: u64) -> Result<Bracket> {
    check_cutoff(p_max)?;
    let tails = Tails::new(weights, p_max)?;
    ThetaFamily::new(1.0, &tails)?
        .sz_partial_sums(p_max)
        .and_then(|v| v.last().map(|p| p.1))
        .ok_or(Error::NotSummable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn gamma_family(d: u32, gamma: f64) -> CoefficientSequence {
        CoefficientSequence::power_log(0.5 - d as f64 / 4.0, gamma / 2.0, 2).unwrap()
    }

    #[test]
    fn zero_coefficients() {
        let z = CoefficientSequence::zero();
        let r = sz_condition(2, &z, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::Converging);
        assert_eq!(r.last().unwrap().upper, 0.0);
        let r = lp_condition(3, 2.0, &z, 1000).unwrap();
        assert_eq!(r.last().unwrap().upper, 0.0);
        assert!(lp_condition(3, 0.5, &z, 10).is_err());
    }

    #[test]
    fn gamma_family_verdicts() {
        for d in 2..=3 {
            let conv = sz_condition(d, &gamma_family(d, 3.0), 1 << 20).unwrap();
            assert_eq!(conv.verdict, Verdict::Converging);
            let div = sz_condition(d, &gamma_family(d, 1.5), 1 << 20).unwrap();
            assert_eq!(div.verdict, Verdict::Diverging);
            let (a, b) = (conv.last().unwrap(), div.last().unwrap());
            assert!(a.width() < 1e-10 * a.upper && b.width() < 1e-10 * b.upper);
            assert!(conv.growth_fit.unwrap().slope < div.growth_fit.unwrap().slope);
        }
    }

    #[test]
    fn tails_match_integral_test_oracle() {
        let g = PowerLog::new(1.0, 3.0);
        let w = WeightSequence::Law { g, n0: 1 };
        let tails = Tails::new(&w, 1000).unwrap();
        for ell in [10u64, 1000, 1001, 100_000] {
            let t = tails.tail(ell).unwrap();
            let l = libm::log(ell as f64);
            let approx = 1.0 / (2.0 * l * l);
            assert!((t.mid() / approx - 1.0).abs() < 3.0 / l, "{ell}: {t:?} vs {approx}");
        }
        let direct: f64 = (1000..200_000u64).map(|n| g.value(n as f64)).sum();
        let (hi, lo) = (tails.tail(1000).unwrap(), tails.tail(200_000).unwrap());
        let diff = Bracket::new(hi.lower - lo.upper, hi.upper - lo.lower);
        assert!(diff.contains(direct, 1e-13), "{diff:?} vs {direct}");
        assert!(diff.width() < 1e-8 * direct);
    }

    #[test]
    fn brackets_contain_refinements() {
        let c = gamma_family(2, 3.0);
        let coarse = sz_condition(2, &c, 1 << 12).unwrap();
        let fine = sz_condition(2, &c, 1 << 16).unwrap();
        let z = coarse.last().unwrap();
        let at = fine.partial_sums.iter().find(|p| p.0 == 1 << 12).unwrap().1;
        assert!(z.contains(at.mid(), 1e-12), "{z:?} {at:?}");
        let pts: Vec<f64> = fine.partial_sums.iter().map(|p| p.1.lower).collect();
        assert!(pts.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn fubini_identity() {
        let vals: Vec<f64> = (0..200).map(|n| 1.0 / (1.0 + (n as f64).sqrt())).collect();
        let c = CoefficientSequence::explicit(vals.clone()).unwrap();
        let r = lp_condition(2, 2.0, &c, 10_000).unwrap();
        let direct: f64 = vals[1..].iter().map(|v| v * v).sum();
        let got = r.last().unwrap();
        assert_eq!(got.width(), 0.0);
        assert!((got.mid() - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn lp_threshold_by_bisection() {
        for (d, p) in [(2u32, 2.0), (3, 2.0), (3, 4.0)] {
            let family = |eps: f64| CoefficientSequence::power_log(-(d as f64 / 2.0 - 1.0 - eps) / 2.0, 0.0, 1).unwrap();
            let (mut lo, mut hi) = (0.0, 10.0);
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                let v = lp_condition(d, p, &family(mid), 10).unwrap().verdict;
                if v == Verdict::Converging {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let predicted = d as f64 / p;
            assert!((hi - predicted).abs() < 1e-9, "d={d} p={p}: {hi}");
            let well_above = lp_condition(d, p, &family(predicted + 2.0), 1_000_000).unwrap();
            assert!(well_above.cauchy);
            let well_below = lp_condition(d, p, &family(predicted - 1.0), 1_000_000).unwrap();
            assert!(!well_below.cauchy);
        }
    }

    #[test]
    fn condensed_agrees_with_direct() {
        for d in 2..=3 {
            let conv = sz_condensed(d, &gamma_family(d, 3.0), 5).unwrap();
            let div = sz_condensed(d, &gamma_family(d, 1.5), 5).unwrap();
            assert_eq!(conv.verdict, sz_condition(d, &gamma_family(d, 3.0), 100).unwrap().verdict);
            assert_eq!(div.verdict, sz_condition(d, &gamma_family(d, 1.5), 100).unwrap().verdict);
            assert!(conv.last_ratio().unwrap() < 1.0);
            assert!(div.last_ratio().unwrap() > 1.0);
        }
        let vals: Vec<f64> = (0..40).map(|n| 1.0 / (1.0 + n as f64)).collect();
        let c = CoefficientSequence::explicit(vals.clone()).unwrap();
        let r = sz_condensed(2, &c, 3).unwrap();
        let direct: f64 = (16..40).map(|n: usize| vals[n] * vals[n] / n as f64).sum();
        assert!((r.blocks[2].mass.mid() - direct).abs() < 1e-15);
    }

    #[test]
    fn upsilon_examples() {
        let w = WeightSequence::explicit((0..=60).map(|n| if n == 0 { 0.0 } else { libm::ldexp(1.0, -n) }).collect())
            .unwrap();
        let u = Upsilon::new(0.5, &w).unwrap();
        assert_eq!(u.value(0.0).unwrap(), 0.0);
        let total: f64 = (1..=60).map(|n| libm::ldexp(1.0, -n)).sum();
        assert!((u.value(1.0).unwrap() - libm::sqrt(total)).abs() < 1e-15);
        let direct: f64 = (1..=60)
            .map(|n| {
                let m = (libm::sqrt(n as f64) * 0.25).min(1.0);
                libm::ldexp(1.0, -n) * m * m
            })
            .sum();
        assert!((u.value(0.25).unwrap() - libm::sqrt(direct)).abs() < 1e-14);
        assert!(Upsilon::new(1.0, &WeightSequence::law(1.0, 1.0, 1).unwrap()).is_err());
    }

    #[test]
    fn upsilon_law_matches_direct() {
        let w = WeightSequence::law(2.0, 0.5, 1).unwrap();
        let u = Upsilon::new(1.0, &w).unwrap();
        for t in [1e-3, 1e-4, 3e-5] {
            let n_star = (1.0 / t) as u64;
            let mut direct = NeumaierSum::default();
            for n in 1..=(50 * n_star) {
                let m = (n as f64 * t).min(1.0);
                direct.add(w.value(n) * m * m);
            }
            let far = WeightSequence::Law { g: PowerLog::new(2.0, 0.5), n0: 1 };
            let rest = Tails::new(&far, 10).unwrap().tail(50 * n_star + 1).unwrap().mid();
            let expect = libm::sqrt(direct.total() + rest);
            let got = u.value(t).unwrap();
            assert!((got / expect - 1.0).abs() < 1e-8, "t={t}: {got} vs {expect}");
        }
        let mut prev = 0.0;
        for k in 0..40 {
            let v = u.value(libm::pow(10.0, -k as f64 / 4.0)).unwrap();
            assert!(prev == 0.0 || v <= prev * (1.0 + 1e-14));
            assert!(v * v <= u.total().upper * (1.0 + 1e-14));
            prev = v;
        }
    }

    #[test]
    fn entropic_single_weight() {
        let w = WeightSequence::explicit(vec![0.0, 1.0]).unwrap();
        let e = entropic_integral(1.0, &w).unwrap();
        assert!(e.converged());
        assert!((e.value - libm::sqrt(core::f64::consts::PI)).abs() < 1e-6, "{e:?}");
        let z = entropic_integral(1.0, &WeightSequence::zero()).unwrap();
        assert_eq!(z.value, 0.0);
        assert!(z.converged());
    }

    #[test]
    fn entropic_refinement_oracle() {
        let w = WeightSequence::explicit(vec![0.0, 0.5, 0.0, 0.3, 0.2]).unwrap();
        let e = entropic_integral(0.5, &w).unwrap();
        let ups = Upsilon::new(0.5, &w).unwrap();
        let f = |w: f64| 2.0 * ups.value(libm::exp(-w * w)).unwrap();
        let rule = GaussLegendre::new(20);
        let k3 = libm::sqrt(0.5 * libm::log(3.0));
        let k4 = libm::sqrt(0.5 * libm::log(4.0));
        let oracle: f64 = [(0.0, k3), (k3, k4), (k4, 12.0)]
            .iter()
            .map(|&(a, b)| crate::quad::refine_composite(&rule, a, b, 4, 1e-13, 12, f).value)
            .sum();
        assert!((e.value - oracle).abs() < 1e-6, "{} vs {}", e.value, oracle);
    }

    #[test]
    fn entropic_detects_slow_families() {
        let div = entropic_integral(1.0, &WeightSequence::law(1.0, 1.5, 1).unwrap()).unwrap();
        assert_ne!(div.status, EntropicStatus::Converged);
        let conv = entropic_integral(1.0, &WeightSequence::law(2.0, 0.0, 1).unwrap()).unwrap();
        assert!(conv.converged(), "{conv:?}");
    }

    #[test]
    fn entropic_vs_sz_sum() {
        let families = [
            WeightSequence::explicit(vec![0.0, 1.0]).unwrap(),
            WeightSequence::explicit((0..=60).map(|n| if n == 0 { 0.0 } else { libm::ldexp(1.0, -n) }).collect()).unwrap(),
            WeightSequence::law(2.0, 0.0, 1).unwrap(),
            WeightSequence::law(3.0, 0.0, 1).unwrap(),
            WeightSequence::law(2.5, 1.0, 1).unwrap(),
        ];
        for w in &families {
            let e = entropic_integral(1.0, w).unwrap();
            let s = sz_weight_sum(w, 100_000).unwrap().mid();
            let ratio = e.value / s;
            assert!((0.1..=10.0).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn v_counting_closed_form() {
        let n = 50usize;
        let w = WeightSequence::explicit((0..=n).map(|k| if k == 0 { 0.0 } else { 1.0 }).collect()).unwrap();
        let tails = Tails::new(&w, 0).unwrap();
        let fam = ThetaFamily::new(1.0, &tails).unwrap();
        for p in 1..80u64 {
            let v = fam.v(p as f64).unwrap().mid();
            let expect = (n as f64 - p as f64 + 1.0).max(0.0);
            assert_eq!(v, expect);
        }
    }

    #[test]
    fn v_identity_and_monotonicity() {
        let w = WeightSequence::explicit((0..(1usize << 19)).map(|n| if n == 0 { 0.0 } else { 1.0 / (n as f64 * n as f64) }).collect())
            .unwrap();
        let report = theta_independence_report(&[0.5, 1.0, 2.0], &w, 1000).unwrap();
        assert!(report.identities_exact());
        let t2p4 = report.identities.iter().find(|i| i.t == 2 && i.p == 4).unwrap();
        assert_eq!(t2p4.lhs_start, 256.0);
        let tails = Tails::new(&w, 0).unwrap();
        let fams: Vec<ThetaFamily> = [0.5, 1.0, 2.0].iter().map(|t| ThetaFamily::new(*t, &tails).unwrap()).collect();
        for p in 1..2000u64 {
            let v: Vec<f64> = fams.iter().map(|f| f.v(p as f64).unwrap().mid()).collect();
            assert!(v[0] <= v[1] && v[1] <= v[2]);
            if p > 1 {
                assert!(fams[1].v(p as f64).unwrap().mid() <= fams[1].v(p as f64 - 1.0).unwrap().mid());
            }
        }
        let u = fams[1].u(10.0).unwrap().mid();
        assert!((u - 9.0).abs() < 1e-15);
    }

    #[test]
    fn snapping() {
        assert_eq!(snapped_floor(libm::pow(libm::ldexp(1.0, 54), 1.0 / 3.0)), 262_144.0);
        assert_eq!(snapped_floor(2.7), 2.0);
        assert_eq!(snapped_ceil(2.0000000000001), 2.0);
    }
}
