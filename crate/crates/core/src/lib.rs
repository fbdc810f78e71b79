//! Numerics for Gaussian random series built on eigenfunctions of the
//! harmonic oscillator `-Δ + |x|²` on `ℝ^d`.
//!
//! The centerpiece is the spectral function `e_{d,n}(x, y)`, the kernel of the
//! orthogonal projector onto the eigenspace of eigenvalue `2n + d`. It is
//! evaluated exactly through a Cauchy product of one-dimensional Hermite
//! functions taken at the "hat" coordinates of the pair, so no eigenbasis of
//! the (high dimensional) eigenspace is ever materialized.
//!
//! Around it sit:
//!
//! * [`special_fn`]: normalized Hermite functions, normalized Bessel
//!   functions through their Poisson integral, binomial weights and
//!   eigenspace dimensions.
//! * [`geometry`]: chord distance, hat coordinates and the sphere parameter.
//! * [`spectral`]: exact and brute-force spectral functions, Bessel-type
//!   approximations, the Mehler cross-check and the `Ω_k` functions.
//! * [`dudley`]: Dudley pseudo-distances of the random series.
//! * [`conditions`]: Salem–Zygmund, `L^p` and entropic conditions.
//! * [`sampler`]: exact joint Gaussian sampling at point grids.
//! * [`verify`]: oscillatory integrals, sum-versus-integral comparisons,
//!   exponent fits and the asymptotic estimate suite.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod conditions;
pub mod dudley;
mod error;
pub mod geometry;
pub mod quad;
pub mod sampler;
pub mod series;
pub mod special_fn;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
