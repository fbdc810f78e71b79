//! Parsing of coefficient laws, weight laws, number lists and sequence files.

use std::path::Path;

use anyhow::{bail, Context, Result};
use oscharm_core::conditions::WeightSequence;
use oscharm_core::dudley::CoefficientSequence;

/// `key=value` pairs separated by commas.
pub fn key_values(spec: &str) -> Result<Vec<(String, f64)>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .with_context(|| format!("expected key=value, got `{item}`"))?;
            let v: f64 = v.trim().parse().with_context(|| format!("bad number in `{item}`"))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn lookup(pairs: &[(String, f64)], allowed: &[&str], spec: &str) -> Result<Vec<Option<f64>>> {
    for (k, _) in pairs {
        if !allowed.contains(&k.as_str()) {
            bail!("unknown key `{k}` in `{spec}` (expected {})", allowed.join(", "));
        }
    }
    Ok(allowed
        .iter()
        .map(|a| pairs.iter().rev().find(|(k, _)| k == a).map(|p| p.1))
        .collect())
}

fn as_start(v: Option<f64>, default: u64) -> Result<u64> {
    match v {
        None => Ok(default),
        Some(x) if x >= 0.0 && x.fract() == 0.0 && x < 1e15 => Ok(x as u64),
        Some(x) => bail!("n0 must be a nonnegative integer, got {x}"),
    }
}

/// `a=..,b=..[,n0=..]` for `c(n) = n^{-a} ln(1+n)^{-b}`, `n ≥ n0`.
pub fn parse_law(spec: &str) -> Result<CoefficientSequence> {
    let pairs = key_values(spec)?;
    let v = lookup(&pairs, &["a", "b", "n0"], spec)?;
    let a = v[0].with_context(|| format!("law `{spec}` needs a=.."))?;
    Ok(CoefficientSequence::power_log(a, v[1].unwrap_or(0.0), as_start(v[2], 1)?)?)
}

/// `p=..,q=..[,n0=..]` for `w(n) = n^{-p} ln(1+n)^{-q}`, `n ≥ n0`.
pub fn parse_weight_law(spec: &str) -> Result<WeightSequence> {
    let pairs = key_values(spec)?;
    let v = lookup(&pairs, &["p", "q", "n0"], spec)?;
    let p = v[0].with_context(|| format!("weights `{spec}` need p=.."))?;
    Ok(WeightSequence::law(p, v[1].unwrap_or(0.0), as_start(v[2], 1)?)?)
}

/// Comma-separated numbers.
pub fn parse_list(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad number `{s}`")))
        .collect()
}

/// Comma-separated nonnegative integers.
pub fn parse_usize_list(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad integer `{s}`")))
        .collect()
}

/// Reads a sequence indexed from 0: either one value per line, or `n,value`
/// records. Lines starting with `#` are skipped; missing indices are zero.
pub fn read_sequence(path: &Path) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut out: Vec<f64> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: malformed record", path.display()))?;
        let field = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .with_context(|| format!("{}:{}: bad number `{}`", path.display(), line + 1, &rec[i]))
        };
        match rec.len() {
            0 => {}
            1 => out.push(field(0)?),
            2 => {
                let n = field(0)?;
                if n < 0.0 || n.fract() != 0.0 || n > 1e8 {
                    bail!("{}:{}: bad index {n}", path.display(), line + 1);
                }
                let n = n as usize;
                if out.len() <= n {
                    out.resize(n + 1, 0.0);
                }
                out[n] = field(1)?;
            }
            k => bail!("{}:{}: expected 1 or 2 fields, got {k}", path.display(), line + 1),
        }
    }
    Ok(out)
}
