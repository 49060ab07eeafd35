use serde::{Deserialize, Serialize};

use super::gauss;
use crate::error::{Error, Result};

/// A single B-spline on its own local knots, scaled to unit integral.
///
/// With `d + 2` knots the spline has degree `d`. Used as the weight function
/// of integral coefficient functionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalizedBSpline {
    knots: Vec<f64>,
}

impl NormalizedBSpline {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidKnots(
                "a normalized B-spline needs at least two knots".into(),
            ));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidKnots("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidKnots("knots must be non-decreasing".into()));
        }
        if knots[knots.len() - 1] <= knots[0] {
            return Err(Error::InvalidKnots("empty support".into()));
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn degree(&self) -> usize {
        self.knots.len() - 2
    }

    pub fn support(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Non-empty knot intervals of the support.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.knots
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| (w[0], w[1]))
    }

    /// Density value at `t` (half-open convention at knots).
    pub fn eval(&self, t: f64) -> f64 {
        let w = &self.knots;
        let d = self.degree();
        let (lo, hi) = self.support();
        if t < lo || t >= hi {
            return 0.0;
        }
        let mut n: Vec<f64> = (0..=d)
            .map(|k| if w[k] <= t && t < w[k + 1] { 1.0 } else { 0.0 })
            .collect();
        for p in 1..=d {
            for k in 0..=(d - p) {
                let mut v = 0.0;
                let dl = w[k + p] - w[k];
                if dl > 0.0 {
                    v += (t - w[k]) / dl * n[k];
                }
                let dr = w[k + p + 1] - w[k + 1];
                if dr > 0.0 {
                    v += (w[k + p + 1] - t) / dr * n[k + 1];
                }
                n[k] = v;
            }
        }
        n[0] * (d as f64 + 1.0) / (hi - lo)
    }

    /// `∫ t^r M(t) dt`, exact up to rounding.
    pub fn moment(&self, r: usize) -> f64 {
        self.moment_shifted(r, 0.0, 1.0)
    }

    /// `∫ ((t - center) / scale)^r M(t) dt`, exact up to rounding.
    pub fn moment_shifted(&self, r: usize, center: f64, scale: f64) -> f64 {
        let n = gauss::points_for_degree(self.degree() + r);
        self.pieces()
            .map(|(a, b)| {
                gauss::integrate(
                    |t| ((t - center) / scale).powi(r as i32) * self.eval(t),
                    a,
                    b,
                    n,
                )
            })
            .sum()
    }

    /// `∫ f M` with a composite Gauss rule: `subdivisions` cells of
    /// `points` nodes on every knot interval.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, points: usize, subdivisions: usize) -> f64 {
        let subdivisions = subdivisions.max(1);
        let mut total = 0.0;
        for (a, b) in self.pieces() {
            let step = (b - a) / subdivisions as f64;
            for k in 0..subdivisions {
                let lo = a + step * k as f64;
                let hi = if k + 1 == subdivisions { b } else { lo + step };
                total += gauss::integrate(|t| f(t) * self.eval(t), lo, hi, points);
            }
        }
        total
    }
}
