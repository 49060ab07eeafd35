//! Quadrature rules obtained by integrating discrete quasi-interpolants.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{Node, QuasiInterpolant};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: (f64, f64),
    /// Exactness degree inherited from the source operator.
    pub degree: usize,
}

impl QuadratureRule {
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, w)| w * f(x)).sum()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `∫_a^b Qf = Σ_γ w_γ f(x_γ)` with `w_γ = Σ_i a_i(γ) ∫ B_i`.
pub fn qi_to_quadrature(q: &QuasiInterpolant) -> Result<QuadratureRule> {
    if !q.is_discrete() {
        return Err(Error::NotDiscrete);
    }
    let ks = q.knots();
    let mut acc: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for (i, lam) in q.functionals().iter().enumerate() {
        let integral = ks.bspline_integral(i)?;
        for ((key, node), w) in lam.keys().zip(lam.nodes()).zip(lam.weights()) {
            let Node::Point(x) = node else {
                return Err(Error::NotDiscrete);
            };
            acc.entry(key).or_insert((*x, 0.0)).1 += w * integral;
        }
    }
    let (nodes, weights) = acc.into_values().unzip();
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: ks.domain(),
        degree: q.exactness_degree(),
    })
}

/// Largest `d <= max_degree` such that the rule integrates every
/// polynomial of degree `<= d` exactly, tested on `((x − c)/s)^r` with `c`
/// the midpoint and `s` the half-width of the domain.
pub fn exactness_degree(rule: &QuadratureRule, max_degree: usize) -> Option<usize> {
    let (a, b) = rule.domain;
    let c = 0.5 * (a + b);
    let s = 0.5 * (b - a);
    let mut best = None;
    for r in 0..=max_degree {
        let exact = if r % 2 == 0 { 2.0 * s / (r as f64 + 1.0) } else { 0.0 };
        let got = rule.apply(|x| ((x - c) / s).powi(r as i32));
        if (got - exact).abs() > 1e-10 * (b - a) {
            break;
        }
        best = Some(r);
    }
    best
}

/// Least-squares slope of `log err` against `log n`; the observed
/// convergence order is its negation.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x.ln(), sy + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(nu, de), &(x, y)| {
        let dx = x.ln() - mx;
        (nu + dx * (y.ln() - my), de + dx * dx)
    });
    num / den
}

/// Errors `|rule_n(f) − exact|` for each `n` in `spans`.
pub fn refinement_errors<B, F>(build: B, f: F, exact: f64, spans: &[usize]) -> Result<Vec<(f64, f64)>>
where
    B: Fn(usize) -> Result<QuadratureRule>,
    F: Fn(f64) -> f64,
{
    spans
        .iter()
        .map(|&n| Ok((n as f64, (build(n)?.apply(&f) - exact).abs())))
        .collect()
}
