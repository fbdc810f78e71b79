//! Acceptance criteria A1–A12. Each returns its check and a detail table.

use std::f64::consts::TAU;
use std::time::Instant;

use anyhow::Result;
use oscharm_core::conditions::{
    lp_condition, sz_condition, theta_independence_report, Verdict, WeightSequence,
};
use oscharm_core::dudley::{dudley_scan, CoefficientSequence};
use oscharm_core::geometry::hat_coords_general;
use oscharm_core::sampler::arc_grid;
use oscharm_core::special_fn::{normalized_bessel, BesselOrder};
use oscharm_core::spectral::{
    chord_grid, mehler_partial_sum, parity_check, spectral_exact, spectral_oracle, PROFILE_POINTS,
};
use oscharm_core::verify::{
    contraction_factor, euler_maclaurin_check, osc_integral, prop14_report, prop14_row, ExponentFit, Prop14Report,
    SumFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::output::{num, Check, Table};
use crate::par;

/// A check together with the measurements behind it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub check: Check,
    pub table: Table,
}

impl Outcome {
    fn new(check: Check, table: Table) -> Self {
        Self { check, table }
    }
}

/// Every criterion identifier in order.
pub const ALL: [&str; 12] = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11", "A12"];

/// Runs one criterion by identifier.
pub fn run(id: &str, seed: u64) -> Result<Vec<Outcome>> {
    Ok(match id {
        "A1" => vec![a1_oracle(seed)?],
        "A2" => vec![a2_mehler(seed)?],
        "A3" => vec![a3_parity(seed)?],
        "A4" => vec![a4_bessel_rate()?],
        "A5" => vec![a5_dudley_band()?],
        "A6" => vec![a6_j0_bound()?],
        "A7" => vec![a7_oscillatory()?],
        "A8" => vec![a8_euler_maclaurin()?],
        "A9" => vec![a9_sampler(seed)?],
        "A10" => vec![a10_theta()?],
        "A11" => vec![a11_conditions(seed)?],
        "A12" => vec![a12_gaussian_sup(seed)?],
        other => anyhow::bail!("unknown criterion `{other}`"),
    })
}

fn random_point(rng: &mut ChaCha8Rng, d: u32, max_norm: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let len = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if len > 1e-3 && len <= 1.0 {
            let radius = max_norm * rng.random::<f64>();
            return v.iter().map(|t| t / len * radius).collect();
        }
    }
}

fn random_pairs(seed: u64, d: u32, count: usize, max_norm: f64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ d as u64);
    (0..count)
        .map(|_| (random_point(&mut rng, d, max_norm), random_point(&mut rng, d, max_norm)))
        .collect()
}

pub const A1_TOLERANCE: f64 = 1e-9;
pub const A1_MAX_LEVEL: usize = 12;

/// Cauchy-product formula against the composition sum.
pub fn a1_oracle(seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    let mut table = Table::new(&["d", "n", "max_relative_error"]);
    let mut worst: f64 = 0.0;
    for d in [2u32, 3, 4] {
        let pairs = random_pairs(seed, d, 100, 1.5);
        for n in 0..=A1_MAX_LEVEL {
            let mut level_worst: f64 = 0.0;
            for (x, y) in &pairs {
                let exact = spectral_exact(d, n, hat_coords_general(x, y)?)?;
                let oracle = spectral_oracle(d, n, x, y)?;
                let exx = spectral_exact(d, n, hat_coords_general(x, x)?)?;
                let eyy = spectral_exact(d, n, hat_coords_general(y, y)?)?;
                let scale = (exx * eyy).abs().sqrt().max(f64::MIN_POSITIVE);
                level_worst = level_worst.max((exact - oracle).abs() / scale);
            }
            worst = worst.max(level_worst);
            table.push(vec![d.to_string(), n.to_string(), num(level_worst)]);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    table.comment(format!("runtime_s={secs:.3}"));
    let pass = worst <= A1_TOLERANCE && secs < 10.0;
    Ok(Outcome::new(
        Check::new("A1", pass, worst, format!("max relative error {worst:.3e}, {secs:.2} s")),
        table,
    ))
}

pub const A2_TOLERANCE: f64 = 1e-8;

/// Truncated Mehler series against the closed form.
pub fn a2_mehler(seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    let mut table = Table::new(&["d", "pair", "partial", "closed_form", "deviation", "tail_bound"]);
    let mut worst: f64 = 0.0;
    for d in [2u32, 3] {
        for (k, (x, y)) in random_pairs(seed, d, 20, 1.5).iter().enumerate() {
            let m = mehler_partial_sum(d, 0.5, x, y, 60)?;
            worst = worst.max(m.deviation());
            table.push(vec![
                d.to_string(),
                k.to_string(),
                num(m.partial),
                num(m.closed_form),
                num(m.deviation()),
                num(m.tail_bound),
            ]);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= A2_TOLERANCE && secs < 10.0;
    Ok(Outcome::new(
        Check::new("A2", pass, worst, format!("max deviation {worst:.3e}, {secs:.2} s")),
        table,
    ))
}

/// `e_{d,n}(-x, y) = (-1)^n e_{d,n}(x, y)`.
pub fn a3_parity(seed: u64) -> Result<Outcome> {
    let mut table = Table::new(&["d", "n", "max_scaled_deviation"]);
    let mut worst: f64 = 0.0;
    for d in [2u32, 3] {
        let pairs = random_pairs(seed.wrapping_add(1), d, 20, 2.0);
        for n in 0..=50 {
            let mut level: f64 = 0.0;
            for (x, y) in &pairs {
                let e = spectral_exact(d, n, hat_coords_general(x, y)?)?;
                level = level.max(parity_check(d, n, x, y)? / e.abs().max(1.0));
            }
            worst = worst.max(level);
            table.push(vec![d.to_string(), n.to_string(), num(level)]);
        }
    }
    Ok(Outcome::new(
        Check::new("A3", worst <= 1e-12, worst, format!("max deviation / max(1,|e|) {worst:.3e}")),
        table,
    ))
}

pub const A4_LEVELS: [usize; 5] = [100, 200, 400, 800, 1600];
/// Near-diagonal cutoff `c` in `r ≤ c/√n`.
pub const PROP14_C: f64 = 2.0;

/// The estimate suite with rows evaluated in parallel.
pub fn prop14_parallel(d: u32, ns: &[usize], rs: &[f64], c: f64) -> Result<Prop14Report> {
    let rows = par::install(|| {
        ns.par_iter()
            .map(|&n| prop14_row(d, n, rs, c))
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(prop14_report(d, c, rows)?)
}

pub fn prop14_table(report: &Prop14Report) -> Table {
    let mut t = Table::new(&[
        "n",
        "bessel_sup_error",
        "diagonal_deviation",
        "diagonal_argmax",
        "far_ratio",
        "near_min",
        "near_max",
    ]);
    t.comment(format!("d={} c={}", report.dimension, num(report.c)));
    t.comment(format!("bessel_slope={}", num(report.bessel_fit.slope)));
    t.comment(format!("diagonal_slope={}", num(report.diagonal_fit.slope)));
    t.comment(format!("far_max={}", num(report.far_max)));
    t.comment(format!("near_band={}", num(report.near_band)));
    for r in &report.rows {
        t.push(vec![
            r.n.to_string(),
            num(r.bessel_sup_error),
            num(r.diagonal_deviation),
            r.diagonal_argmax.to_string(),
            num(r.far_ratio),
            num(r.near_min),
            num(r.near_max),
        ]);
    }
    t
}

/// Band for the Bessel-rate slope in `d ≥ 3`.
pub const BESSEL_SLOPE_BAND: (f64, f64) = (-0.65, -0.35);
/// Band for the diagonal slope in `d = 2`.
pub const DIAGONAL_SLOPE_BAND: (f64, f64) = (-0.35, -0.15);

/// Rate check for one dimension: the Bessel slope for `d ≥ 3`, the diagonal
/// slope for `d = 2`.
pub fn prop14_rate_check(report: &Prop14Report) -> Check {
    let (slope, (lo, hi), what) = if report.dimension == 2 {
        (report.diagonal_fit.slope, DIAGONAL_SLOPE_BAND, "diagonal")
    } else {
        (report.bessel_fit.slope, BESSEL_SLOPE_BAND, "bessel")
    };
    Check::new(
        "A4",
        (lo..=hi).contains(&slope),
        slope,
        format!("d={} {what} slope {slope:.4} in [{lo}, {hi}]", report.dimension),
    )
}

pub fn a4_bessel_rate() -> Result<Outcome> {
    let start = Instant::now();
    let rs = chord_grid(0.0, 1.0, PROFILE_POINTS);
    let r3 = prop14_parallel(3, &A4_LEVELS, &rs, PROP14_C)?;
    let r2 = prop14_parallel(2, &A4_LEVELS, &rs, PROP14_C)?;
    let c3 = prop14_rate_check(&r3);
    let c2 = prop14_rate_check(&r2);
    let secs = start.elapsed().as_secs_f64();
    let mut table = prop14_table(&r3);
    let t2 = prop14_table(&r2);
    table.comments.extend(t2.comments);
    table.rows.extend(t2.rows);
    table.comment(format!("runtime_s={secs:.3}"));
    let pass = c3.pass && c2.pass && secs < 120.0;
    Ok(Outcome::new(
        Check::new(
            "A4",
            pass,
            c3.value,
            format!("{}; {}; {secs:.1} s", c3.detail, c2.detail),
        ),
        table,
    ))
}

pub const A5_LEVELS: [usize; 4] = [64, 128, 256, 512];
pub const DUDLEY_BAND: f64 = 10.0;

pub fn dudley_table(scans: &[oscharm_core::dudley::DudleyScan]) -> Table {
    let mut t = Table::new(&["d", "n", "r", "delta", "ratio"]);
    for s in scans {
        t.comment(format!(
            "d={} min_ratio={} max_ratio={} band={}",
            s.dimension,
            num(s.min_ratio),
            num(s.max_ratio),
            num(s.band())
        ));
        for c in &s.cells {
            t.push(vec![s.dimension.to_string(), c.n.to_string(), num(c.r), num(c.delta), num(c.ratio)]);
        }
    }
    t
}

/// Dudley band for one dimension.
pub fn dudley_band_check(d: u32, ns: &[usize], rs: &[f64]) -> Result<(Check, oscharm_core::dudley::DudleyScan)> {
    let scan = par::install(|| dudley_scan(d, ns, rs))??;
    let band = scan.band();
    Ok((
        Check::new("A5", band <= DUDLEY_BAND, band, format!("d={d} band {band:.3}")),
        scan,
    ))
}

pub fn a5_dudley_band() -> Result<Outcome> {
    let start = Instant::now();
    let rs = chord_grid(0.02, 1.0, 40);
    let (c2, s2) = dudley_band_check(2, &A5_LEVELS, &rs)?;
    let (c3, s3) = dudley_band_check(3, &A5_LEVELS, &rs)?;
    let secs = start.elapsed().as_secs_f64();
    let mut table = dudley_table(&[s2.clone(), s3.clone()]);
    let pooled = s2.max_ratio.max(s3.max_ratio) / s2.min_ratio.min(s3.min_ratio);
    table.comment(format!("pooled_band={}", num(pooled)));
    table.comment(format!("runtime_s={secs:.3}"));
    let worst = c2.value.max(c3.value);
    Ok(Outcome::new(
        Check::new(
            "A5",
            c2.pass && c3.pass && secs < 120.0,
            worst,
            format!("{}; {}; pooled {pooled:.3}", c2.detail, c3.detail),
        ),
        table,
    ))
}

/// `(1 - J̃_0(t)) / min(1, t)²` on `t = 0.1 k`, `k = 1..500`.
pub fn a6_j0_bound() -> Result<Outcome> {
    let ord = BesselOrder::new(2)?;
    let mut table = Table::new(&["t", "ratio"]);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in 1..=500 {
        let t = 0.1 * k as f64;
        let ratio = (1.0 - normalized_bessel(ord, t)?) / t.min(1.0).powi(2);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        table.push_nums(&[t, ratio]);
    }
    Ok(Outcome::new(
        Check::new(
            "A6",
            lo >= 0.2 && hi <= 1.5,
            hi,
            format!("ratio range [{lo:.4}, {hi:.4}] within [0.2, 1.5]"),
        ),
        table,
    ))
}

pub const A7_BETAS: [f64; 2] = [0.5, 1.5];
pub const CONTRACTION_ALPHAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const CONTRACTION_BETAS: [f64; 4] = [-0.5, 0.0, 0.5, 1.5];

/// Identity at `β = 0`, decay envelopes and the contraction grid.
pub fn a7_oscillatory() -> Result<Outcome> {
    let mut table = Table::new(&["kind", "alpha", "beta", "value"]);
    let mut identity: f64 = 0.0;
    for k in 0..=400 {
        let a = 0.5 * k as f64;
        let exact = if a == 0.0 { 2.0 } else { 2.0 * a.sin() / a };
        identity = identity.max((osc_integral(a, 0.0)? - exact).abs());
    }
    table.push(vec!["identity".into(), num(200.0), num(0.0), num(identity)]);
    let mut slopes_ok = true;
    let mut details = vec![format!("identity error {identity:.2e}")];
    for beta in A7_BETAS {
        let xs: Vec<f64> = (0..3100).map(|k| 10.0 + 0.1 * k as f64).collect();
        let ys = xs
            .iter()
            .map(|&a| osc_integral(a, beta).map(f64::abs))
            .collect::<Result<Vec<_>, _>>()?;
        let fit = ExponentFit::envelope(&xs, &ys)?;
        let target = -(1.0 + beta);
        slopes_ok &= (fit.slope - target).abs() <= 0.15;
        details.push(format!("beta={beta} slope {:.4} (target {target})", fit.slope));
        table.push(vec!["decay_slope".into(), num(320.0), num(beta), num(fit.slope)]);
    }
    let mut worst: f64 = 0.0;
    for a0 in CONTRACTION_ALPHAS {
        for beta in CONTRACTION_BETAS {
            let c = contraction_factor(a0, beta)?;
            worst = worst.max(c.value);
            table.push(vec!["contraction".into(), num(a0), num(beta), num(c.value)]);
        }
    }
    details.push(format!("max contraction {worst:.4}"));
    Ok(Outcome::new(
        Check::new(
            "A7",
            identity <= 1e-10 && slopes_ok && worst < 1.0,
            identity,
            details.join("; "),
        ),
        table,
    ))
}

pub const A8_AS: [f64; 3] = [0.0, 1.0, 2.0 * std::f64::consts::SQRT_2];
pub const A8_BETAS: [f64; 3] = [-0.5, 0.0, 0.5];

/// Per-`a` constants `max_{n,β} discrepancy / (n^β ln n)` and their spread.
pub fn a8_euler_maclaurin() -> Result<Outcome> {
    let mut table = Table::new(&["a", "beta", "n", "sum", "scaled_integral", "scaled_discrepancy"]);
    let mut per_a = Vec::new();
    for a in A8_AS {
        let mut c_a: f64 = 0.0;
        for beta in A8_BETAS {
            for k in 6..=13 {
                let n = 1usize << k;
                let em = euler_maclaurin_check(n, a, beta, SumFunction::Cos)?;
                let nf = n as f64;
                let scaled = em.discrepancy / (nf.powf(beta) * nf.ln());
                c_a = c_a.max(scaled);
                table.push(vec![num(a), num(beta), n.to_string(), num(em.sum), num(em.scaled_integral), num(scaled)]);
            }
        }
        per_a.push(c_a);
    }
    let hi = per_a.iter().copied().fold(0.0, f64::max);
    let lo = per_a.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = hi / lo;
    for (a, c) in A8_AS.iter().zip(&per_a) {
        table.comment(format!("a={} constant={}", num(*a), num(*c)));
    }
    table.comment(format!("constant={} spread={}", num(hi), num(spread)));
    Ok(Outcome::new(
        Check::new(
            "A8",
            spread <= 3.0,
            spread,
            format!("constant {hi:.4}, per-a spread {spread:.3}"),
        ),
        table,
    ))
}

/// Sampler defaults shared by the `sample` command and A9.
pub const SAMPLE_LAW: (f64, f64) = (0.75, 0.0);
pub const SAMPLE_N_MAX: usize = 64;
pub const SAMPLE_TOLERANCE: f64 = 0.05;

/// Equispaced points on the full great circle.
pub fn circle_points(d: u32, count: usize, radius: f64) -> Vec<Vec<f64>> {
    let arc = TAU * (count.saturating_sub(1)) as f64 / count.max(1) as f64;
    arc_grid(d, count, arc)
        .into_iter()
        .map(|p| p.into_iter().map(|v| v * radius).collect())
        .collect()
}

/// Covariance law of 20000 draws and reproducibility across worker counts.
pub fn a9_sampler(seed: u64) -> Result<Outcome> {
    let d = 2;
    let coeffs = CoefficientSequence::power_log(SAMPLE_LAW.0, SAMPLE_LAW.1, 1)?;
    let pts = circle_points(d, 10, 1.0);
    let cov = par::install(|| par::field_covariance(d, &coeffs, &pts, SAMPLE_N_MAX))??;
    let one = par::pool(1)?.install(|| par::sample_field(pts.clone(), cov.clone(), 20_000, seed))?;
    let many = par::pool(4)?.install(|| par::sample_field(pts.clone(), cov.clone(), 20_000, seed))?;
    let bitwise = one
        .draws
        .iter()
        .zip(many.draws.iter())
        .all(|(a, b)| a.to_bits() == b.to_bits());
    let err = one.covariance_error();
    let mut table = Table::new(&["threads", "frobenius_relative_error", "jitter"]);
    table.comment(format!("seed={seed}"));
    table.push(vec!["1".into(), num(err), num(one.jitter)]);
    table.push(vec!["4".into(), num(many.covariance_error()), num(many.jitter)]);
    Ok(Outcome::new(
        Check::new(
            "A9",
            err < SAMPLE_TOLERANCE && bitwise,
            err,
            format!("Frobenius error {err:.4}, bit-identical across threads: {bitwise}"),
        ),
        table,
    ))
}

/// Weight families `(p, q)` of `w(n) = n^{-p} ln(1+n)^{-q}` with their role.
pub const THETA_FAMILIES: [(f64, f64, &str); 5] = [
    (2.0, 0.0, "convergent"),
    (1.0, 3.0, "convergent"),
    (1.0, 1.5, "divergent"),
    (1.0, 1.8, "divergent"),
    (1.0, 2.0, "borderline"),
];
pub const THETAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const THETA_P_MAX: u64 = 10_000;
pub const THETA_RATIO: f64 = 10.0;

pub fn theta_table(rows: &[(String, oscharm_core::conditions::ThetaReport)]) -> Table {
    let mut t = Table::new(&["family", "theta", "p", "lower", "upper"]);
    for (name, rep) in rows {
        t.comment(format!(
            "{name}: max_ratio={} identities_exact={}",
            num(rep.max_ratio),
            rep.identities_exact()
        ));
        for row in &rep.rows {
            for (p, b) in &row.partial_sums {
                t.push(vec![name.clone(), num(row.theta), p.to_string(), num(b.lower), num(b.upper)]);
            }
        }
    }
    t
}

/// Explicit sequence `1/n²` on `n < 2^19` for the `V` identities.
pub fn identity_sequence() -> Result<WeightSequence> {
    let vals: Vec<f64> = (0..1u64 << 19)
        .map(|n| if n == 0 { 0.0 } else { 1.0 / (n as f64 * n as f64) })
        .collect();
    Ok(WeightSequence::explicit(vals)?)
}

pub fn a10_theta() -> Result<Outcome> {
    let explicit = identity_sequence()?;
    let ident = theta_independence_report(&THETAS, &explicit, 64)?;
    let mut worst: f64 = 0.0;
    let mut reports = vec![("explicit".to_string(), ident.clone())];
    let computed = par::install(|| {
        THETA_FAMILIES
            .par_iter()
            .map(|&(p, q, role)| {
                let w = WeightSequence::law(p, q, 1)?;
                let rep = theta_independence_report(&THETAS, &w, THETA_P_MAX)?;
                Ok((format!("p={p} q={q} ({role})"), rep))
            })
            .collect::<Result<Vec<_>, oscharm_core::Error>>()
    })??;
    let mut exact = ident.identities_exact();
    for (_, rep) in &computed {
        worst = worst.max(rep.max_ratio);
        exact &= rep.identities_exact();
    }
    reports.extend(computed);
    let table = theta_table(&reports);
    Ok(Outcome::new(
        Check::new(
            "A10",
            exact && worst <= THETA_RATIO,
            worst,
            format!("identities exact: {exact}; max pairwise ratio {worst:.4}"),
        ),
        table,
    ))
}

/// `c(n) = n^{d/4 - 1/2} ln(1+n)^{-γ/2}` for `n ≥ 2`: weights `n^{-1} ln^{-γ}`.
pub fn gamma_family(d: u32, gamma: f64) -> Result<CoefficientSequence> {
    Ok(CoefficientSequence::power_log(0.5 - d as f64 / 4.0, gamma / 2.0, 2)?)
}

pub const GAMMAS: [f64; 2] = [1.5, 3.0];

/// Gamma-family verdicts against `γ > 2` and Fubini on finite supports.
pub fn a11_conditions(seed: u64) -> Result<Outcome> {
    let mut table = Table::new(&["case", "d", "parameter", "verdict_or_error", "lower", "upper"]);
    let mut ok = true;
    for d in [2u32, 3] {
        for gamma in GAMMAS {
            let rep = sz_condition(d, &gamma_family(d, gamma)?, 1 << 20)?;
            let expected = if gamma > 2.0 { Verdict::Converging } else { Verdict::Diverging };
            ok &= rep.verdict == expected;
            let last = rep.last().unwrap_or(oscharm_core::series::Bracket::exact(f64::NAN));
            table.push(vec![
                "gamma".into(),
                d.to_string(),
                num(gamma),
                rep.verdict.as_str().into(),
                num(last.lower),
                num(last.upper),
            ]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fubini: f64 = 0.0;
    for (d, len) in [(2u32, 50usize), (2, 500), (3, 50), (3, 500)] {
        let vals: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..2.0)).collect();
        let c = CoefficientSequence::explicit(vals.clone())?;
        let rep = lp_condition(d, 2.0, &c, 10_000)?;
        let half = d as f64 / 2.0;
        let direct: f64 = (1..len)
            .map(|n| {
                let inner: f64 = (1..=n).map(|l| (l as f64).powf(half - 1.0)).sum();
                vals[n] * vals[n] * (n as f64).powf(-half) * inner
            })
            .sum();
        let got = rep.last().map_or(f64::NAN, |b| b.mid());
        let rel = (got - direct).abs() / direct;
        fubini = fubini.max(if rel.is_nan() { f64::INFINITY } else { rel });
        table.push(vec!["fubini".into(), d.to_string(), len.to_string(), num(rel), num(got), num(direct)]);
    }
    let fubini_ok = fubini <= 1e-12;
    Ok(Outcome::new(
        Check::new(
            "A11",
            ok && fubini_ok,
            fubini,
            format!("gamma verdicts correct: {ok}; Fubini relative error {fubini:.2e}"),
        ),
        table,
    ))
}

pub const A12_J: usize = 32;
pub const A12_TRIALS: usize = 10_000;
pub const A12_BOUND: f64 = 3.0;

pub fn a12_gaussian_sup(seed: u64) -> Result<Outcome> {
    let mut table = Table::new(&["I", "mean_sup", "bound", "ratio"]);
    let mut worst: f64 = 0.0;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 2..=10 {
        let i = 1usize << k;
        let norms = vec![1.0; i];
        let g = par::install(|| par::gaussian_sup(A12_J, &norms, A12_TRIALS, seed))??;
        worst = worst.max(g.ratio());
        xs.push(((2 + i) as f64).ln());
        ys.push(g.mean_sup * g.mean_sup);
        table.push(vec![i.to_string(), num(g.mean_sup), num(g.bound), num(g.ratio())]);
    }
    let fit = ExponentFit::fit(&xs, &ys)?;
    table.comment(format!("seed={seed} J={A12_J} trials={A12_TRIALS}"));
    table.comment(format!("slope_of_mean_sup_squared_vs_log_I={}", num(fit.slope)));
    Ok(Outcome::new(
        Check::new(
            "A12",
            worst <= A12_BOUND,
            worst,
            format!("max ratio {worst:.4}, log-log slope of E sup² against ln(2+I) {:.3}", fit.slope),
        ),
        table,
    ))
}

/// Default seed of the randomized criteria.
pub const DEFAULT_SEED: u64 = 20_240_607;
