//! Coefficient functionals `Λ_α` and the quasi-interpolants built from them.
//!
//! A functional is a short weighted sum over *nodes*: point evaluations
//! `f(x_γ)` for discrete operators, or moments `∫ f M_γ` against unit-integral
//! B-splines for integral ones. Each node carries an integer key
//! (`anchor + offset`); within one quasi-interpolant equal keys denote the
//! same node, which is what norm estimation and quadrature rely on.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::splinecore::{KnotLayout, KnotSequence, NormalizedBSpline};

/// Relative tolerance of the coefficient-level exactness test.
pub const EXACTNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionalKind {
    /// Point evaluations only.
    Discrete,
    /// Moments against normalized dual B-splines; point evaluations may
    /// appear as the degenerate end functionals.
    IntegralDualSpline,
}

/// What a functional samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Point(f64),
    Density(NormalizedBSpline),
}

/// Accuracy of the composite Gauss rule used on density nodes for general
/// (non-polynomial) integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    pub points: usize,
    pub subdivisions: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            points: 10,
            subdivisions: 4,
        }
    }
}

impl Node {
    pub fn is_point(&self) -> bool {
        matches!(self, Node::Point(_))
    }

    /// Node value on `((x - center) / scale)^r`, exact for every `r`.
    pub fn monomial(&self, r: usize, center: f64, scale: f64) -> f64 {
        match self {
            Node::Point(x) => ((x - center) / scale).powi(r as i32),
            Node::Density(m) => m.moment_shifted(r, center, scale),
        }
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: &F, opts: IntegrationOptions) -> f64 {
        match self {
            Node::Point(x) => f(*x),
            Node::Density(m) => m.integrate(f, opts.points, opts.subdivisions),
        }
    }

    /// Smallest interval containing what the node looks at.
    pub fn extent(&self) -> (f64, f64) {
        match self {
            Node::Point(x) => (*x, *x),
            Node::Density(m) => m.support(),
        }
    }
}

/// `Λ(f) = sum_k weights[k] * node_k(f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFunctional {
    kind: FunctionalKind,
    anchor: i64,
    offsets: Vec<i64>,
    weights: Vec<f64>,
    nodes: Vec<Node>,
}

impl CoefficientFunctional {
    pub fn new(
        kind: FunctionalKind,
        anchor: i64,
        offsets: Vec<i64>,
        weights: Vec<f64>,
        nodes: Vec<Node>,
    ) -> Result<Self> {
        if offsets.is_empty() || offsets.len() != weights.len() || weights.len() != nodes.len() {
            return Err(Error::InvalidParameter(format!(
                "functional at {anchor}: {} offsets, {} weights, {} nodes",
                offsets.len(),
                weights.len(),
                nodes.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "functional at {anchor}: non-finite weight {w}"
            )));
        }
        if kind == FunctionalKind::Discrete && nodes.iter().any(|n| !n.is_point()) {
            return Err(Error::InvalidParameter(
                "discrete functional with a density node".into(),
            ));
        }
        Ok(Self {
            kind,
            anchor,
            offsets,
            weights,
            nodes,
        })
    }

    /// Unit-weight point evaluation at `x`.
    pub fn point(anchor: i64, x: f64) -> Self {
        Self {
            kind: FunctionalKind::Discrete,
            anchor,
            offsets: vec![0],
            weights: vec![1.0],
            nodes: vec![Node::Point(x)],
        }
    }

    pub fn kind(&self) -> FunctionalKind {
        self.kind
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Node keys `anchor + offset`.
    pub fn keys(&self) -> impl Iterator<Item = i64> + '_ {
        self.offsets.iter().map(move |o| self.anchor + o)
    }

    /// `ν(a) = sum |a(γ)|`.
    pub fn nu(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    pub fn is_discrete(&self) -> bool {
        self.nodes.iter().all(Node::is_point)
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.apply_with(f, IntegrationOptions::default())
    }

    pub fn apply_with<F: Fn(f64) -> f64>(&self, f: F, opts: IntegrationOptions) -> f64 {
        self.weights
            .iter()
            .zip(&self.nodes)
            .map(|(w, n)| w * n.apply(&f, opts))
            .sum()
    }

    /// `Λ(e_r)` computed from node powers / moments, without sampling.
    pub fn apply_monomial(&self, r: usize) -> f64 {
        self.apply_monomial_shifted(r, 0.0, 1.0)
    }

    /// `Λ(((x - center) / scale)^r)`.
    pub fn apply_monomial_shifted(&self, r: usize, center: f64, scale: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.nodes)
            .map(|(w, n)| w * n.monomial(r, center, scale))
            .sum()
    }

    /// JSON record `{kind, anchor, offsets, weights, nodes}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("functional serializes")
    }
}

/// Operator family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    Schoenberg,
    S2,
    Gs1,
    Gs2,
    UniformNbDqi { order: usize, n: usize, r: usize },
    UniformNbIqi { order: usize, n: usize, r: usize },
    NearBest { p: usize, q: usize },
    QStarP2 { p: usize },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Schoenberg => write!(f, "s1"),
            Family::S2 => write!(f, "s2"),
            Family::Gs1 => write!(f, "g1"),
            Family::Gs2 => write!(f, "g2"),
            Family::UniformNbDqi { order, n, r } => write!(f, "nb-dqi(order={order},n={n},r={r})"),
            Family::UniformNbIqi { order, n, r } => write!(f, "nb-iqi(order={order},n={n},r={r})"),
            Family::NearBest { p, q } => write!(f, "nearbest(p={p},q={q})"),
            Family::QStarP2 { p } => write!(f, "qp2(p={p})"),
        }
    }
}

/// Outcome of the coefficient-level exactness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactnessReport {
    pub exact: bool,
    /// Worst `|Λ_j(ê_r) - θ̂_j^{(r)}|` over the checked range, in the
    /// dimensionless basis `ê_r = ((x - c) / s)^r` with `c`, `s` the domain
    /// midpoint and half-width.
    pub max_residual: f64,
    pub worst_index: usize,
    pub worst_order: usize,
}

/// `Qf = sum_j Λ_j(f) B_j` with one functional per basis function.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiInterpolant {
    knots: KnotSequence,
    functionals: Vec<CoefficientFunctional>,
    exactness: usize,
    family: Family,
}

impl QuasiInterpolant {
    /// Builds the operator and verifies its claimed exactness degree.
    pub fn new(
        knots: KnotSequence,
        functionals: Vec<CoefficientFunctional>,
        exactness: usize,
        family: Family,
    ) -> Result<Self> {
        let qi = Self::unchecked(knots, functionals, exactness, family)?;
        let report = qi.is_exact_on(exactness)?;
        if !report.exact {
            return Err(Error::NotExact {
                degree: exactness,
                residual: report.max_residual,
                index: report.worst_index as i64,
            });
        }
        Ok(qi)
    }

    pub(crate) fn unchecked(
        knots: KnotSequence,
        functionals: Vec<CoefficientFunctional>,
        exactness: usize,
        family: Family,
    ) -> Result<Self> {
        if functionals.len() != knots.len() {
            return Err(Error::InvalidParameter(format!(
                "{} functionals for {} basis functions",
                functionals.len(),
                knots.len()
            )));
        }
        Ok(Self {
            knots,
            functionals,
            exactness,
            family,
        })
    }

    pub fn knots(&self) -> &KnotSequence {
        &self.knots
    }

    pub fn functionals(&self) -> &[CoefficientFunctional] {
        &self.functionals
    }

    pub fn functional(&self, j: usize) -> Option<&CoefficientFunctional> {
        self.functionals.get(j)
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    /// Claimed (and verified) polynomial exactness degree.
    pub fn exactness_degree(&self) -> usize {
        self.exactness
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_discrete(&self) -> bool {
        self.functionals.iter().all(CoefficientFunctional::is_discrete)
    }

    /// `max_j ν(Λ_j)`, an upper bound of the infinity norm.
    pub fn nu_bound(&self) -> f64 {
        self.functionals
            .iter()
            .map(CoefficientFunctional::nu)
            .fold(0.0, f64::max)
    }

    /// Checks `Λ_j(e_r) = θ_j^{(r)}` for all `j` and `r <= q`.
    pub fn is_exact_on(&self, q: usize) -> Result<ExactnessReport> {
        let m = self.knots.degree();
        if q > m {
            return Err(Error::OrderTooLarge { r: q, m });
        }
        let (a, b) = self.knots.domain();
        let center = 0.5 * (a + b);
        let scale = (0.5 * (b - a)).max(f64::MIN_POSITIVE);
        let mut report = ExactnessReport {
            exact: true,
            max_residual: 0.0,
            worst_index: 0,
            worst_order: 0,
        };
        for (j, lam) in self.functionals.iter().enumerate() {
            for r in 0..=q {
                let target = self.knots.symmetric_coeff_shifted(j, r, center, scale)?;
                let got = lam.apply_monomial_shifted(r, center, scale);
                let res = (got - target).abs();
                if res > report.max_residual || res.is_nan() {
                    report.max_residual = res;
                    report.worst_index = j;
                    report.worst_order = r;
                }
            }
        }
        report.exact = report.max_residual <= EXACTNESS_TOL;
        Ok(report)
    }

    /// Node table `key -> node` over all functionals.
    pub fn node_table(&self) -> BTreeMap<i64, &Node> {
        let mut out = BTreeMap::new();
        for lam in &self.functionals {
            for (key, node) in lam.keys().zip(lam.nodes()) {
                out.entry(key).or_insert(node);
            }
        }
        out
    }

    /// Spline coefficients `Λ_j(f)`. For clamped sequences every node must
    /// lie in the domain.
    pub fn coefficients<F: Fn(f64) -> f64>(&self, f: F) -> Result<Vec<f64>> {
        self.coefficients_with(f, IntegrationOptions::default())
    }

    pub fn coefficients_with<F: Fn(f64) -> f64>(
        &self,
        f: F,
        opts: IntegrationOptions,
    ) -> Result<Vec<f64>> {
        if self.knots.layout() == KnotLayout::Clamped {
            let (a, b) = self.knots.domain();
            let tol = 1e-12 * (b - a);
            for lam in &self.functionals {
                for node in lam.nodes() {
                    let (lo, hi) = node.extent();
                    if lo < a - tol || hi > b + tol {
                        let x = if lo < a - tol { lo } else { hi };
                        return Err(Error::OutsideDomain { x, a, b });
                    }
                }
            }
        }
        Ok(self
            .functionals
            .iter()
            .map(|lam| lam.apply_with(&f, opts))
            .collect())
    }

    /// `Qf(x)`.
    pub fn eval<F: Fn(f64) -> f64>(&self, f: F, x: f64) -> Result<f64> {
        let c = self.coefficients(f)?;
        self.knots.eval_spline(&c, x)
    }

    /// Node weights of `Qf(x) = sum_γ w_γ(x) node_γ(f)`, sorted by key.
    pub fn node_weights_at(&self, x: f64) -> Result<Vec<(i64, f64)>> {
        let (first, basis) = self.knots.basis_functions(x)?;
        Ok(combine(
            basis
                .iter()
                .enumerate()
                .map(|(k, &b)| (b, &self.functionals[first + k])),
        ))
    }
}

/// `sum_j b_j Λ_j` regrouped by node key.
pub(crate) fn combine<'a>(
    terms: impl Iterator<Item = (f64, &'a CoefficientFunctional)>,
) -> Vec<(i64, f64)> {
    let mut acc: Vec<(i64, f64)> = Vec::new();
    for (b, lam) in terms {
        if b == 0.0 {
            continue;
        }
        for (key, w) in lam.keys().zip(lam.weights()) {
            match acc.iter_mut().find(|(k, _)| *k == key) {
                Some(slot) => slot.1 += b * w,
                None => acc.push((key, b * w)),
            }
        }
    }
    acc.sort_by_key(|(k, _)| *k);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_functional_on_constant() {
        let lam = CoefficientFunctional::point(3, 0.25);
        assert_eq!(lam.apply(|_| 1.0), 1.0);
        assert_eq!(lam.apply_monomial(0), 1.0);
        assert_eq!(lam.nu(), 1.0);
    }

    #[test]
    fn three_point_functional_on_line() {
        // uniform quadratic S2 weights at theta = 0.5, 1.5, 2.5
        let lam = CoefficientFunctional::new(
            FunctionalKind::Discrete,
            1,
            vec![-1, 0, 1],
            vec![-0.125, 1.25, -0.125],
            vec![Node::Point(0.5), Node::Point(1.5), Node::Point(2.5)],
        )
        .unwrap();
        assert!((lam.apply(|x| x) - 1.5).abs() < 1e-15);
        assert!((lam.nu() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed() {
        assert!(CoefficientFunctional::new(
            FunctionalKind::Discrete,
            0,
            vec![0, 1],
            vec![1.0],
            vec![Node::Point(0.0)]
        )
        .is_err());
        assert!(CoefficientFunctional::new(
            FunctionalKind::Discrete,
            0,
            vec![0],
            vec![f64::NAN],
            vec![Node::Point(0.0)]
        )
        .is_err());
        let dens = NormalizedBSpline::new(vec![0.0, 1.0]).unwrap();
        assert!(CoefficientFunctional::new(
            FunctionalKind::Discrete,
            0,
            vec![0],
            vec![1.0],
            vec![Node::Density(dens)]
        )
        .is_err());
    }

    #[test]
    fn json_record_shape() {
        let lam = CoefficientFunctional::point(2, 0.5);
        let v = lam.to_json();
        assert_eq!(v["kind"], "discrete");
        assert_eq!(v["anchor"], 2);
        assert_eq!(v["offsets"][0], 0);
        assert_eq!(v["weights"][0], 1.0);
        assert_eq!(v["nodes"][0]["point"], 0.5);
        let back: CoefficientFunctional = serde_json::from_value(v).unwrap();
        assert_eq!(back, lam);
    }

    #[test]
    fn combine_merges_shared_keys() {
        let a = CoefficientFunctional::point(0, 0.0);
        let b = CoefficientFunctional::new(
            FunctionalKind::Discrete,
            1,
            vec![-1, 0],
            vec![0.5, 0.5],
            vec![Node::Point(0.0), Node::Point(1.0)],
        )
        .unwrap();
        let w = combine([(0.25, &a), (0.75, &b)].into_iter());
        assert_eq!(w, vec![(0, 0.25 + 0.375), (1, 0.375)]);
    }
}
