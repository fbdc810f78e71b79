//! Argument parsing and command dispatch.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use oscharm_core::conditions::{
    entropic_integral, lp_condition, sz_condensed, sz_condition, theta_independence_report, ConditionReport,
    Verdict, WeightSequence,
};
use oscharm_core::dudley::CoefficientSequence;
use oscharm_core::geometry::SpherePair;
use oscharm_core::sampler::{sup_norm_partial_sums, MAX_SUP_BLOCK};
use oscharm_core::special_fn::{bessel_j0, BesselOrder};
use oscharm_core::spectral::{
    bessel_scale, chord_grid, ground_state_diagonal, spectral_at, SpectralProfile, PROFILE_POINTS,
};

use crate::criteria::{self, circle_points, Outcome};
use crate::input::{parse_law, parse_list, parse_usize_list, parse_weight_law, read_sequence};
use crate::output::{num, report, Check, Table};
use crate::par;

#[derive(Debug, Parser)]
#[command(
    name = "oscharm",
    version,
    about = "Spectral function of the harmonic oscillator: profiles, scans, convergence conditions and sampling",
    after_help = "Tables are CSV with '#' comment lines. RESULT lines go to stdout when --out is set, \
                  otherwise to stderr. OSCHARM_THREADS caps the worker count. Exit status: 0 when every \
                  embedded check passes, 1 on a failed check or computation error, 2 on a usage error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact spectral function and its Bessel approximations along the chord distance.
    Profile(ProfileArgs),
    /// Diagonal values e_{d,n}(x,x) over a range of levels.
    Diag(DiagArgs),
    /// Dudley ratio scan δ_n n^{d/4} / min(1, √n r).
    Dudley(DudleyArgs),
    /// Salem–Zygmund or L^p condition for a coefficient sequence.
    Szcheck(SzArgs),
    /// Entropic integral and θ-independence of Salem–Zygmund sums for a weight sequence.
    Entropy(EntropyArgs),
    /// Gaussian samples of the truncated random series at points of a great circle.
    Sample(SampleArgs),
    /// Verification suites with PASS/FAIL lines.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output CSV path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    /// Coefficient law c(n) = n^{-a} ln(1+n)^{-b} for n ≥ n0, as a=..,b=..[,n0=..].
    #[arg(long, value_name = "SPEC", conflicts_with = "coeffs")]
    pub law: Option<String>,
    /// File of coefficients c(0), c(1), ... (one per line, or n,c records).
    #[arg(long, value_name = "PATH")]
    pub coeffs: Option<PathBuf>,
}

impl CoeffArgs {
    fn sequence(&self, default: Option<(f64, f64)>) -> Result<CoefficientSequence> {
        match (&self.law, &self.coeffs) {
            (Some(l), _) => parse_law(l),
            (None, Some(p)) => Ok(CoefficientSequence::explicit(read_sequence(p)?)?),
            (None, None) => match default {
                Some((a, b)) => Ok(CoefficientSequence::power_log(a, b, 1)?),
                None => bail!("one of --law or --coeffs is required"),
            },
        }
    }
}

fn dimension() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(2..=64)
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Dimension d ≥ 2.
    #[arg(long, default_value_t = 3, value_parser = dimension())]
    pub d: u32,
    /// Level n ≥ 1.
    #[arg(long, default_value_t = 150, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    pub n: u64,
    /// Number of equispaced chord values in [0, min(1, 2R)].
    #[arg(long, default_value_t = PROFILE_POINTS, value_parser = clap::value_parser!(usize))]
    pub points: usize,
    /// Sphere radius R. Bessel columns are written for R = 1 only.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Write raw values instead of values divided by n^{d/2-1}.
    #[arg(long)]
    pub raw: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct DiagArgs {
    /// Dimension d ≥ 2.
    #[arg(long, default_value_t = 2, value_parser = dimension())]
    pub d: u32,
    /// First level.
    #[arg(long, default_value_t = 0)]
    pub n_min: usize,
    /// Last level.
    #[arg(long, default_value_t = 400)]
    pub n_max: usize,
    /// Sphere radius R.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct DudleyArgs {
    /// Dimension d ≥ 2.
    #[arg(long, default_value_t = 2, value_parser = dimension())]
    pub d: u32,
    /// Comma-separated levels.
    #[arg(long, default_value = "64,128,256,512")]
    pub ns: String,
    /// Smallest chord of the grid.
    #[arg(long, default_value_t = 0.02)]
    pub r_min: f64,
    /// Largest chord of the grid.
    #[arg(long, default_value_t = 1.0)]
    pub r_max: f64,
    /// Number of chord values.
    #[arg(long, default_value_t = 40)]
    pub r_points: usize,
    /// Largest accepted max/min ratio.
    #[arg(long, default_value_t = criteria::DUDLEY_BAND)]
    pub band: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct SzArgs {
    /// Dimension d ≥ 2.
    #[arg(long, default_value_t = 2, value_parser = dimension())]
    pub d: u32,
    #[command(flatten)]
    pub coeffs: CoeffArgs,
    /// Largest cutoff L.
    #[arg(long, default_value_t = 1_000_000)]
    pub l_max: u64,
    /// Check the L^p condition with this exponent p ≥ 1 instead.
    #[arg(long)]
    pub p: Option<f64>,
    /// Also report the condensed form over blocks ℓ ≤ this value.
    #[arg(long, value_name = "ELL")]
    pub condensed: Option<u32>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Weight law w(n) = n^{-p} ln(1+n)^{-q} for n ≥ n0, as p=..,q=..[,n0=..].
    #[arg(long, value_name = "SPEC", conflicts_with = "weights_file", default_value = "p=2")]
    pub weights: String,
    /// File of weights w(0), w(1), ...; index 0 is ignored.
    #[arg(long, value_name = "PATH")]
    pub weights_file: Option<PathBuf>,
    /// Comma-separated θ values.
    #[arg(long, default_value = "0.5,1,2")]
    pub thetas: String,
    /// Largest index P of the Salem–Zygmund sums.
    #[arg(long, default_value_t = criteria::THETA_P_MAX)]
    pub p_max: u64,
    /// Largest accepted pairwise ratio across θ.
    #[arg(long, default_value_t = criteria::THETA_RATIO)]
    pub ratio: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Dimension d ≥ 2.
    #[arg(long, default_value_t = 2, value_parser = dimension())]
    pub d: u32,
    /// Number of equispaced points on a great circle.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub points: u64,
    /// Number of draws.
    #[arg(long, default_value_t = 20_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub coeffs: CoeffArgs,
    /// Truncation level of the series.
    #[arg(long, default_value_t = criteria::SAMPLE_N_MAX)]
    pub n_max: usize,
    /// Sphere radius R.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Largest accepted relative Frobenius error of the empirical covariance.
    #[arg(long, default_value_t = criteria::SAMPLE_TOLERANCE)]
    pub tolerance: f64,
    /// Also estimate block sups for blocks ℓ ≤ this value, written to --blocks-out.
    #[arg(long, value_name = "ELL", requires = "blocks_out")]
    pub blocks: Option<u32>,
    /// CSV path of the block table.
    #[arg(long, value_name = "PATH")]
    pub blocks_out: Option<PathBuf>,
    /// Points of the arc grid used for block sups.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Draws per block.
    #[arg(long, default_value_t = 2000)]
    pub block_draws: usize,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// A1
    Oracle,
    /// A2
    Mehler,
    /// A3
    Parity,
    /// A4 and A5
    Prop14,
    /// A6
    BesselBound,
    /// A7
    Osc,
    /// A8
    EulerMaclaurin,
    /// A9
    Sampler,
    /// A10
    Theta,
    /// A11
    Conditions,
    /// A12
    GaussianSup,
    /// A1 to A12
    All,
}

impl Suite {
    fn criteria(self) -> &'static [&'static str] {
        match self {
            Suite::Oracle => &["A1"],
            Suite::Mehler => &["A2"],
            Suite::Parity => &["A3"],
            Suite::Prop14 => &["A4", "A5"],
            Suite::BesselBound => &["A6"],
            Suite::Osc => &["A7"],
            Suite::EulerMaclaurin => &["A8"],
            Suite::Sampler => &["A9"],
            Suite::Theta => &["A10"],
            Suite::Conditions => &["A11"],
            Suite::GaussianSup => &["A12"],
            Suite::All => &criteria::ALL,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Restrict the prop14 suite to one dimension.
    #[arg(long, value_parser = dimension())]
    pub d: Option<u32>,
    #[arg(long, default_value_t = criteria::DEFAULT_SEED)]
    pub seed: u64,
    /// Directory receiving one detail CSV per criterion.
    #[arg(long, value_name = "DIR")]
    pub tables: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

/// Runs a parsed command. Returns whether every embedded check passed.
pub fn run(cli: Cli) -> Result<bool> {
    let (table, checks, out) = match cli.command {
        Command::Profile(a) => (profile(&a)?, Vec::new(), a.out.out),
        Command::Diag(a) => {
            let (t, c) = diag(&a)?;
            (t, c, a.out.out)
        }
        Command::Dudley(a) => {
            let (t, c) = dudley(&a)?;
            (t, c, a.out.out)
        }
        Command::Szcheck(a) => {
            let (t, c) = szcheck(&a)?;
            (t, c, a.out.out)
        }
        Command::Entropy(a) => {
            let (t, c) = entropy(&a)?;
            (t, c, a.out.out)
        }
        Command::Sample(a) => {
            let (t, c) = sample(&a)?;
            (t, c, a.out.out)
        }
        Command::Verify(a) => {
            let (t, c) = verify(&a)?;
            (t, c, a.out.out)
        }
    };
    table.save(out.as_deref())?;
    report(&checks, out.is_none());
    Ok(checks.iter().all(|c| c.pass))
}

fn check_radius(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        bail!("--radius must be positive and finite, got {r}");
    }
    Ok(())
}

pub fn profile(a: &ProfileArgs) -> Result<Table> {
    check_radius(a.radius)?;
    let n = a.n as usize;
    let unit = a.radius == 1.0;
    let grid = chord_grid(0.0, (2.0 * a.radius).min(1.0), a.points);
    let scale = if a.raw { 1.0 } else { (n as f64).powf(a.d as f64 / 2.0 - 1.0) };
    let mut t;
    if unit {
        let prof = par::install(|| {
            use rayon::prelude::*;
            grid.par_iter()
                .map(|&r| oscharm_core::spectral::profile_row(a.d, n, r))
                .collect::<Result<Vec<_>, _>>()
        })??;
        let prof = SpectralProfile::from_rows(a.d, n, prof);
        let prof = if a.raw { prof } else { prof.normalized() };
        t = Table::new(&["r", "exact", "bessel1", "bessel2", "err1", "err2"]);
        header(&mut t, a.d, n, a.radius, a.raw);
        t.comment(format!("sup_err1={} sup_err2={}", num(prof.sup_err1()), num(prof.sup_err2())));
        for r in &prof.rows {
            t.push_nums(&[r.r, r.exact, r.bessel1, r.bessel2, r.err1, r.err2]);
        }
    } else {
        t = Table::new(&["r", "exact"]);
        header(&mut t, a.d, n, a.radius, a.raw);
        for &r in &grid {
            let e = spectral_at(n, SpherePair::new(a.d, r, a.radius)?)?;
            t.push_nums(&[r, e / scale]);
        }
    }
    Ok(t)
}

fn header(t: &mut Table, d: u32, n: usize, radius: f64, raw: bool) {
    t.comment(format!("profile d={d} n={n} radius={}", num(radius)));
    t.comment(if raw {
        "values are e_{d,n}(x,y)".to_string()
    } else {
        "values are e_{d,n}(x,y) / n^{d/2-1}".to_string()
    });
}

/// `1 / ((2π)^{d/2} Γ(d/2))`.
fn diagonal_limit(d: u32) -> Result<f64> {
    Ok(bessel_scale(d, 1) * BesselOrder::new(d)?.value_at_zero())
}

pub fn diag(a: &DiagArgs) -> Result<(Table, Vec<Check>)> {
    check_radius(a.radius)?;
    if a.n_min > a.n_max {
        bail!("--n-min exceeds --n-max");
    }
    let pair = SpherePair::new(a.d, 0.0, a.radius)?;
    let limit = diagonal_limit(a.d)?;
    let envelope = a.d == 2 && a.radius == 1.0;
    let mut header = vec!["n", "e_diag", "normalized", "limit"];
    if envelope {
        header.extend(["envelope_lo", "envelope_hi"]);
    }
    let mut t = Table::new(&header);
    t.comment(format!("diag d={} radius={}", a.d, num(a.radius)));
    t.comment("normalized = e_{d,n}(x,x) / n^{d/2-1}; limit = 1/((2pi)^{d/2} Gamma(d/2))");
    let values = par::install(|| {
        use rayon::prelude::*;
        (a.n_min..=a.n_max)
            .into_par_iter()
            .map(|n| spectral_at(n, pair))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let mut checks = Vec::new();
    for (k, e) in values.iter().enumerate() {
        let n = a.n_min + k;
        let norm = if n == 0 { *e } else { e / (n as f64).powf(a.d as f64 / 2.0 - 1.0) };
        let mut row = vec![*e, norm, limit];
        if envelope {
            let j = bessel_j0(2.0 * (2.0 * n as f64).sqrt())?.abs();
            row.extend([(1.0 - j) / (2.0 * PI), (1.0 + j) / (2.0 * PI)]);
        }
        t.push(std::iter::once(n.to_string()).chain(row.iter().map(|&v| num(v))).collect());
        if n == 0 {
            let g = ground_state_diagonal(a.d, a.radius);
            let dev = (e - g).abs() / g;
            checks.push(Check::new("ground-state", dev <= 1e-12, dev, "e_{d,0}(x,x) = pi^{-d/2} e^{-R^2}"));
        }
    }
    Ok((t, checks))
}

pub fn dudley(a: &DudleyArgs) -> Result<(Table, Vec<Check>)> {
    let ns = parse_usize_list(&a.ns)?;
    if !(a.r_min > 0.0 && a.r_min <= a.r_max && a.r_max <= 1.0) {
        bail!("chord range must satisfy 0 < r-min <= r-max <= 1");
    }
    let rs = chord_grid(a.r_min, a.r_max, a.r_points);
    let (mut check, scan) = criteria::dudley_band_check(a.d, &ns, &rs)?;
    check.pass = scan.band() <= a.band;
    Ok((criteria::dudley_table(&[scan]), vec![check]))
}

fn condition_table(rep: &ConditionReport, kind: &str) -> Table {
    let mut t = Table::new(&["cutoff", "lower", "upper"]);
    t.comment(format!("{kind} verdict={}", rep.verdict.as_str()));
    t.comment(format!("cauchy={}", rep.cauchy));
    if let Some(f) = rep.growth_fit {
        t.comment(format!("growth_slope={}", num(f.slope)));
    }
    if let Some(r) = rep.reason {
        t.comment(format!("reason={r}"));
    }
    for (l, b) in &rep.partial_sums {
        t.push(vec![l.to_string(), num(b.lower), num(b.upper)]);
    }
    t
}

fn brackets_consistent(rep: &ConditionReport) -> bool {
    rep.partial_sums.iter().all(|(_, b)| b.lower <= b.upper)
        && rep
            .partial_sums
            .windows(2)
            .all(|w| w[0].1.lower <= w[1].1.lower && w[0].1.upper <= w[1].1.upper)
}

pub fn szcheck(a: &SzArgs) -> Result<(Table, Vec<Check>)> {
    let coeffs = a.coeffs.sequence(None)?;
    let (rep, kind) = match a.p {
        Some(p) => (lp_condition(a.d, p, &coeffs, a.l_max)?, format!("lp p={p}")),
        None => (sz_condition(a.d, &coeffs, a.l_max)?, "sz".to_string()),
    };
    let mut t = condition_table(&rep, &kind);
    t.comment(format!("d={}", a.d));
    if let Some(ell) = a.condensed {
        let c = sz_condensed(a.d, &coeffs, ell)?;
        t.comment(format!(
            "condensed verdict={} total=[{}, {}]",
            c.verdict.as_str(),
            num(c.total.lower),
            num(c.total.upper)
        ));
        for b in &c.blocks {
            t.comment(format!("condensed ell={} term=[{}, {}]", b.ell, num(b.term.lower), num(b.term.upper)));
        }
    }
    let ok = rep.verdict != Verdict::Inconclusive && brackets_consistent(&rep);
    let value = rep.last().map_or(f64::NAN, |b| b.upper);
    let id = if a.p.is_some() { "lpcheck" } else { "szcheck" };
    Ok((t, vec![Check::new(id, ok, value, rep.verdict.as_str())]))
}

pub fn entropy(a: &EntropyArgs) -> Result<(Table, Vec<Check>)> {
    let w = match &a.weights_file {
        Some(p) => WeightSequence::explicit(read_sequence(p)?)?,
        None => parse_weight_law(&a.weights)?,
    };
    let thetas = parse_list(&a.thetas)?;
    let rep = par::install(|| theta_independence_report(&thetas, &w, a.p_max))??;
    let mut t = criteria::theta_table(&[("weights".to_string(), rep.clone())]);
    for &theta in &thetas {
        let e = entropic_integral(theta, &w)?;
        t.comment(format!(
            "entropic theta={} value={} tail_bound={} panels={} status={:?}",
            num(theta),
            num(e.value),
            num(e.tail_bound),
            e.panels,
            e.status
        ));
    }
    let ok = rep.identities_exact() && rep.max_ratio <= a.ratio;
    Ok((t, vec![Check::new("A10", ok, rep.max_ratio, "theta independence")]))
}

pub fn sample(a: &SampleArgs) -> Result<(Table, Vec<Check>)> {
    check_radius(a.radius)?;
    let coeffs = a.coeffs.sequence(Some(criteria::SAMPLE_LAW))?;
    let pts = circle_points(a.d, a.points as usize, a.radius);
    let cov = par::install(|| par::field_covariance(a.d, &coeffs, &pts, a.n_max))??;
    let s = par::install(|| par::sample_field(pts.clone(), cov.clone(), a.draws, a.seed))??;
    let serial = par::pool(1)?.install(|| par::sample_field(pts.clone(), cov.clone(), a.draws, a.seed))?;
    let identical = s.draws.iter().zip(serial.draws.iter()).all(|(x, y)| x.to_bits() == y.to_bits());
    let err = s.covariance_error();
    let names: Vec<String> = std::iter::once("draw".to_string())
        .chain((0..pts.len()).map(|i| format!("p{i}")))
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut t = Table::new(&refs);
    t.comment(format!("seed={}", a.seed));
    t.comment(format!("d={} n_max={} radius={}", a.d, a.n_max, num(a.radius)));
    for (i, p) in pts.iter().enumerate() {
        let coords: Vec<String> = p.iter().map(|&v| num(v)).collect();
        t.comment(format!("p{i}=({})", coords.join(" ")));
    }
    t.comment(format!("jitter={} covariance_error={}", num(s.jitter), num(err)));
    for k in 0..s.draws.nrows() {
        let mut row = vec![k.to_string()];
        row.extend(s.draws.row(k).iter().map(|&v| num(v)));
        t.push(row);
    }
    let checks = vec![Check::new(
        "A9",
        err < a.tolerance && identical,
        err,
        format!("covariance error {err:.4}, thread-independent: {identical}"),
    )];
    if let (Some(ell), Some(path)) = (a.blocks, &a.blocks_out) {
        if ell > MAX_SUP_BLOCK {
            bail!("--blocks must be at most {MAX_SUP_BLOCK}");
        }
        let grid = oscharm_core::sampler::arc_grid(a.d, a.grid, 2.0 * PI * (a.grid as f64 - 1.0) / a.grid as f64);
        let blocks = par::install(|| sup_norm_partial_sums(a.d, &coeffs, &grid, ell, a.block_draws, a.seed))??;
        let mut bt = Table::new(&["ell", "n_lo", "n_hi", "truncated", "mean_sup", "weight", "ratio", "jitter"]);
        bt.comment(format!("seed={}", a.seed));
        bt.comment(format!("grid={} draws={}", a.grid, a.block_draws));
        for b in &blocks {
            bt.push(vec![
                b.ell.to_string(),
                b.n_lo.to_string(),
                b.n_hi.to_string(),
                b.truncated.to_string(),
                num(b.mean_sup),
                num(b.weight),
                num(b.ratio()),
                num(b.jitter),
            ]);
        }
        bt.save(Some(path))?;
    }
    Ok((t, checks))
}

fn write_tables(dir: &Path, outcomes: &[Outcome]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (k, o) in outcomes.iter().enumerate() {
        let name = if outcomes[..k].iter().any(|p| p.check.id == o.check.id) {
            format!("{}_{k}.csv", o.check.id)
        } else {
            format!("{}.csv", o.check.id)
        };
        o.table.save(Some(&dir.join(name)))?;
    }
    Ok(())
}

/// A4 and A5 for a single dimension.
fn prop14_single(d: u32) -> Result<Vec<Outcome>> {
    let rs = chord_grid(0.0, 1.0, PROFILE_POINTS);
    let report = criteria::prop14_parallel(d, &criteria::A4_LEVELS, &rs, criteria::PROP14_C)?;
    let rate = criteria::prop14_rate_check(&report);
    let (band, scan) = criteria::dudley_band_check(d, &criteria::A5_LEVELS, &chord_grid(0.02, 1.0, 40))?;
    Ok(vec![
        Outcome {
            check: rate,
            table: criteria::prop14_table(&report),
        },
        Outcome {
            check: band,
            table: criteria::dudley_table(&[scan]),
        },
    ])
}

pub fn verify(a: &VerifyArgs) -> Result<(Table, Vec<Check>)> {
    let mut outcomes = Vec::new();
    if let (Suite::Prop14, Some(d)) = (a.suite, a.d) {
        outcomes = prop14_single(d)?;
    } else {
        for id in a.suite.criteria() {
            outcomes.extend(criteria::run(id, a.seed)?);
        }
    }
    if let Some(dir) = &a.tables {
        write_tables(dir, &outcomes)?;
    }
    let mut t = Table::new(&["id", "status", "value", "detail"]);
    t.comment(format!("seed={}", a.seed));
    for o in &outcomes {
        t.push(vec![
            o.check.id.clone(),
            o.check.status().into(),
            num(o.check.value),
            o.check.detail.clone(),
        ]);
    }
    Ok((t, outcomes.into_iter().map(|o| o.check).collect()))
}
