//! Thread pool sized from `OSCHARM_THREADS` and parallel drivers whose
//! results do not depend on the worker count.

use anyhow::Result;
use oscharm_core::dudley::CoefficientSequence;
use oscharm_core::sampler::{
    check_points, covariance_entry, gaussian_sup_matrix, gaussian_sup_summary, gaussian_sup_trial,
    DMatrix, FieldSample, GaussianSampler, GaussianSup,
};
use rayon::prelude::*;

pub const THREADS_ENV: &str = "OSCHARM_THREADS";

/// Worker count: `OSCHARM_THREADS` when set to a positive integer, else the
/// available parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?)
}

/// Runs `f` on a pool of [`thread_count`] workers.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    Ok(pool(thread_count())?.install(f))
}

/// Field covariance with matrix cells evaluated in parallel.
pub fn field_covariance(d: u32, coeffs: &CoefficientSequence, points: &[Vec<f64>], n_max: usize) -> Result<DMatrix<f64>> {
    check_points(d, points)?;
    let m = points.len();
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let values = cells
        .par_iter()
        .map(|&(i, j)| covariance_entry(d, coeffs, &points[i], &points[j], n_max))
        .collect::<Result<Vec<f64>, _>>()?;
    let mut cov = DMatrix::zeros(m, m);
    for (&(i, j), v) in cells.iter().zip(values) {
        cov[(i, j)] = v;
        cov[(j, i)] = v;
    }
    Ok(cov)
}

/// Draws with one counter-based stream per draw index.
pub fn sample_field(points: Vec<Vec<f64>>, cov: DMatrix<f64>, num_draws: usize, seed: u64) -> Result<FieldSample> {
    let s = GaussianSampler::new(cov.clone())?;
    let rows: Vec<_> = (0..num_draws as u64).into_par_iter().map(|k| s.draw(seed, k)).collect();
    Ok(FieldSample::from_rows(points, cov, &rows, seed, s.jitter()))
}

/// Monte-Carlo Gaussian sup with trials evaluated in parallel.
pub fn gaussian_sup(j: usize, row_norms: &[f64], trials: usize, seed: u64) -> Result<GaussianSup> {
    let a = gaussian_sup_matrix(j, row_norms, seed)?;
    let sups: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| gaussian_sup_trial(&a, seed, t))
        .collect();
    Ok(gaussian_sup_summary(row_norms, &sups))
}
