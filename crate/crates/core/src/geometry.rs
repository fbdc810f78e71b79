//! Point pairs on a sphere and the hat coordinates
//! `x̂ = (|x+y| + |x-y|)/2`, `ŷ = (|x+y| - |x-y|)/2`.
//!
//! The map `(x, y) ↦ (x̂, ŷ)` is a non-linear isometry:
//! `x̂² + ŷ² = |x|² + |y|²`, `x̂ŷ = ⟨x, y⟩` and `x̂ - ŷ = |x - y|`.

use alloc::vec::Vec;

use crate::error::{ensure_finite, Error, Result};

/// A pair of points on the sphere `R·S^{d-1}`, stored through its chord
/// length only. Every quantity downstream is rotation invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePair {
    dimension: u32,
    chord: f64,
    radius: f64,
}

impl SpherePair {
    /// A pair on the unit sphere.
    pub fn unit(dimension: u32, chord: f64) -> Result<Self> {
        Self::new(dimension, chord, 1.0)
    }

    pub fn new(dimension: u32, chord: f64, radius: f64) -> Result<Self> {
        ensure_finite(chord, "chord")?;
        ensure_finite(radius, "radius")?;
        if dimension < 2 {
            return Err(Error::Domain {
                param: "d",
                value: dimension as f64,
                expected: "d >= 2",
            });
        }
        if radius <= 0.0 {
            return Err(Error::Domain {
                param: "radius",
                value: radius,
                expected: "radius > 0",
            });
        }
        if !(0.0..=2.0 * radius).contains(&chord) {
            return Err(Error::Domain {
                param: "chord",
                value: chord,
                expected: "0 <= chord <= 2 radius",
            });
        }
        Ok(Self {
            dimension,
            chord,
            radius,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn chord(&self) -> f64 {
        self.chord
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `|x + y| = sqrt(4R² - r²)`.
    pub fn sum_norm(&self) -> f64 {
        let r = self.chord;
        let rr = self.radius;
        libm::sqrt((4.0 * rr * rr - r * r).max(0.0))
    }

    /// Angle `α = 2 arcsin(r / 2R)` between the two points.
    pub fn angle(&self) -> f64 {
        2.0 * libm::asin((self.chord / (2.0 * self.radius)).min(1.0))
    }

    /// Canonical representatives `x = R e_1`, `y = R (cos α, sin α, 0, …)`.
    pub fn representatives(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.dimension as usize;
        let a = self.angle();
        let mut x = alloc::vec![0.0; d];
        let mut y = alloc::vec![0.0; d];
        x[0] = self.radius;
        y[0] = self.radius * libm::cos(a);
        y[1] = self.radius * libm::sin(a);
        (x, y)
    }

    /// The diagonal pair `(x, x)` on the same sphere.
    pub fn diagonal(&self) -> Self {
        Self {
            chord: 0.0,
            ..*self
        }
    }
}

/// Hat coordinates of a pair, plus the sphere parameter `s` when both points
/// lie on the unit sphere with `|x - y| ≤ 1`; then `x̂ = sqrt(1+s)` and
/// `ŷ = sqrt(1-s)` with `s ∈ [0, √3/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatCoords {
    pub x_hat: f64,
    pub y_hat: f64,
    pub s: Option<f64>,
}

impl HatCoords {
    /// `|x - y| = x̂ - ŷ`.
    pub fn chord(&self) -> f64 {
        self.x_hat - self.y_hat
    }

    /// `|x + y| = x̂ + ŷ`.
    pub fn sum_norm(&self) -> f64 {
        self.x_hat + self.y_hat
    }

    fn from_norms(sum: f64, diff: f64) -> Self {
        Self {
            x_hat: 0.5 * (sum + diff),
            y_hat: 0.5 * (sum - diff),
            s: None,
        }
    }
}

/// Hat coordinates of a pair on a sphere.
pub fn hat_coords(pair: SpherePair) -> HatCoords {
    let mut hc = HatCoords::from_norms(pair.sum_norm(), pair.chord);
    if pair.radius == 1.0 && pair.chord <= 1.0 {
        hc.s = Some(s_from_chord(pair.chord));
    }
    hc
}

/// Hat coordinates of arbitrary points `x, y ∈ ℝ^d`.
pub fn hat_coords_general(x: &[f64], y: &[f64]) -> Result<HatCoords> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::Domain {
            param: "d",
            value: 0.0,
            expected: "d >= 1",
        });
    }
    let mut sum = 0.0;
    let mut diff = 0.0;
    for (a, b) in x.iter().zip(y) {
        ensure_finite(*a, "x")?;
        ensure_finite(*b, "y")?;
        sum += (a + b) * (a + b);
        diff += (a - b) * (a - b);
    }
    Ok(HatCoords::from_norms(libm::sqrt(sum), libm::sqrt(diff)))
}

/// Sphere parameter of a unit-sphere chord `r ∈ [0, 1]`: the solution of
/// `r = sqrt(1+s) - sqrt(1-s)`, which is `s = x̂² - 1 = r sqrt(1 - r²/4)`.
pub fn s_from_chord(r: f64) -> f64 {
    r * libm::sqrt(1.0 - 0.25 * r * r)
}

/// Inverse of [`s_from_chord`]: `r = sqrt(1+s) - sqrt(1-s)`.
pub fn chord_from_s(s: f64) -> f64 {
    // (√(1+s) - √(1-s)) = 2s / (√(1+s) + √(1-s)) avoids cancellation near 0
    2.0 * s / (libm::sqrt(1.0 + s) + libm::sqrt(1.0 - s))
}

/// Largest admissible sphere parameter, `√3/2`, reached at chord 1.
pub const S_MAX: f64 = 0.866_025_403_784_438_6;
