//! Near-best coefficient functionals: minimize `‖λ‖₁` subject to the
//! exactness constraints `V λ = b`.
//!
//! The l1 problem is rewritten as the LP `min Σ(u+v)` with `V(u−v) = b`,
//! `u, v >= 0` and solved by [`simplex::minimize`]. Rows use monomials
//! shifted to the anchor and scaled by the stencil half-width, which keeps
//! the Vandermonde rows well conditioned without changing the solution set.

pub(crate) mod dense;
pub mod simplex;

use crate::error::{Error, Result};
use crate::functionals::Node;
use crate::splinecore::{symmetric_of_window, KnotSequence, NormalizedBSpline};

/// Tolerance on the feasibility residual, relative to `max(1, ‖b‖∞)`.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Tolerance on the primal/dual objective gap.
pub const DUALITY_TOL: f64 = 1e-9;

/// One anchor's exactness system.
#[derive(Debug, Clone)]
pub struct NearBestProblem {
    anchor: i64,
    offsets: Vec<i64>,
    nodes: Vec<Node>,
    matrix: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    q: usize,
    center: f64,
    scale: f64,
}

/// Result of [`solve_l1`].
#[derive(Debug, Clone)]
pub struct L1Solution {
    pub weights: Vec<f64>,
    /// `ν* = ‖λ*‖₁`.
    pub nu: f64,
    /// Multipliers of the equality constraints; `|Vᵀy| <= 1` at optimality.
    pub dual: Vec<f64>,
    /// `b·y`, equal to `ν*` up to rounding.
    pub dual_value: f64,
    /// `‖Vλ* − b‖∞` in the conditioned basis.
    pub residual: f64,
    /// `max(0, ‖Vᵀy‖∞ − 1)`.
    pub dual_infeasibility: f64,
}

impl L1Solution {
    pub fn duality_gap(&self) -> f64 {
        (self.nu - self.dual_value).abs()
    }

    pub fn support_size(&self, tol: f64) -> usize {
        self.weights.iter().filter(|w| w.abs() > tol).count()
    }
}

impl NearBestProblem {
    /// General constructor: `targets[r]` must be the B-coefficient of
    /// `((x - center) / scale)^r`.
    pub fn from_nodes(
        anchor: i64,
        offsets: Vec<i64>,
        nodes: Vec<Node>,
        targets: Vec<f64>,
        center: f64,
        scale: f64,
    ) -> Result<Self> {
        if offsets.len() != nodes.len() || nodes.is_empty() || targets.is_empty() {
            return Err(Error::InvalidParameter(
                "near-best problem needs matching offsets/nodes and at least one constraint".into(),
            ));
        }
        if !(scale > 0.0) {
            return Err(Error::CoincidentNodes(anchor));
        }
        let q = targets.len() - 1;
        let matrix = (0..=q)
            .map(|r| nodes.iter().map(|n| n.monomial(r, center, scale)).collect())
            .collect();
        Ok(Self {
            anchor,
            offsets,
            nodes,
            matrix,
            rhs: targets,
            q,
            center,
            scale,
        })
    }

    /// The `Q_{p,q}` problem at anchor `i`: nodes `θ_{i+s}`, `|s| <= p`.
    ///
    /// Uniform emulations extend Greville points past the stored range;
    /// otherwise the whole stencil must exist.
    pub fn discrete(ks: &KnotSequence, anchor: usize, p: usize, q: usize) -> Result<Self> {
        let m = ks.degree();
        if q > m || q > 2 * p {
            return Err(Error::InvalidParameter(format!(
                "q={q} must satisfy q <= min(m, 2p) = {}",
                m.min(2 * p)
            )));
        }
        let i = anchor as i64;
        let p = p as i64;
        let offsets: Vec<i64> = (-p..=p).collect();
        let mut points = Vec::with_capacity(offsets.len());
        for s in &offsets {
            let x = ks
                .extended_greville(i + s)
                .filter(|_| ks.uniform_step().is_some() || (i + s >= 0 && ((i + s) as usize) < ks.len()))
                .ok_or(Error::IndexOutOfRange {
                    index: i + s,
                    lo: 0,
                    hi: ks.len() as i64 - 1,
                })?;
            points.push(x);
        }
        Self::from_points(ks, anchor, offsets, points, q)
    }

    /// Problem at `anchor` over the consecutive Greville points
    /// `θ_first, ..., θ_{first+count-1}` (used where a centred stencil does not fit).
    pub fn windowed(ks: &KnotSequence, anchor: usize, first: usize, count: usize, q: usize) -> Result<Self> {
        if first + count > ks.len() || count == 0 {
            return Err(Error::IndexOutOfRange {
                index: (first + count) as i64 - 1,
                lo: 0,
                hi: ks.len() as i64 - 1,
            });
        }
        if q > ks.degree() || q + 1 > count {
            return Err(Error::InvalidParameter(format!(
                "q={q} needs q <= m and at least q+1 nodes"
            )));
        }
        let offsets: Vec<i64> = (first..first + count).map(|k| k as i64 - anchor as i64).collect();
        let points = (first..first + count)
            .map(|k| ks.greville(k))
            .collect::<Result<Vec<_>>>()?;
        Self::from_points(ks, anchor, offsets, points, q)
    }

    fn from_points(ks: &KnotSequence, anchor: usize, offsets: Vec<i64>, points: Vec<f64>, q: usize) -> Result<Self> {
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::CoincidentNodes(anchor as i64));
        }
        let center = ks.greville(anchor)?;
        let lo = points[0];
        let hi = points[points.len() - 1];
        let scale = 0.5 * (hi - lo);
        let targets = (0..=q)
            .map(|r| ks.symmetric_coeff_shifted(anchor, r, center, scale))
            .collect::<Result<Vec<_>>>()?;
        Self::from_nodes(
            anchor as i64,
            offsets,
            points.into_iter().map(Node::Point).collect(),
            targets,
            center,
            scale,
        )
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Constraint matrix in the conditioned basis, `(q+1) × ncols`.
    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn ncols(&self) -> usize {
        self.nodes.len()
    }

    /// `max_r |Σ_s λ(s) V(r,s) − b(r)|`.
    pub fn residual(&self, weights: &[f64]) -> f64 {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (row.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Minimizes `‖λ‖₁` subject to `V λ = b`.
pub fn solve_l1(prob: &NearBestProblem) -> Result<L1Solution> {
    let k = prob.ncols();
    let rows: Vec<Vec<f64>> = prob
        .matrix
        .iter()
        .map(|row| row.iter().copied().chain(row.iter().map(|v| -v)).collect())
        .collect();
    let cost = vec![1.0; 2 * k];
    let lp = match start_basis(prob) {
        Some(start) => simplex::minimize_from(&cost, &rows, &prob.rhs, &start)?,
        None => simplex::minimize(&cost, &rows, &prob.rhs)?,
    };
    let mut weights: Vec<f64> = (0..k).map(|s| lp.x[s] - lp.x[k + s]).collect();
    let mut dual = lp.dual.clone();
    if let Some((w, y)) = refine(prob, &lp.basis, &weights) {
        if prob.residual(&w) <= prob.residual(&weights) {
            weights = w;
            if let Some(y) = y {
                dual = y;
            }
        }
    }
    let nu = weights.iter().map(|w| w.abs()).sum();
    let dual_value = dual.iter().zip(&prob.rhs).map(|(y, b)| y * b).sum();
    let dual_infeasibility = (0..k)
        .map(|s| {
            let v: f64 = prob.matrix.iter().zip(&dual).map(|(row, y)| row[s] * y).sum();
            (v.abs() - 1.0).max(0.0)
        })
        .fold(0.0, f64::max);
    let residual = prob.residual(&weights);
    Ok(L1Solution {
        weights,
        nu,
        dual,
        dual_value,
        residual,
        dual_infeasibility,
    })
}

/// Feasible starting basis for the split LP: the `q+1` nodes nearest the
/// anchor solve the square exactness system, and each weight's sign picks
/// its `u` or `v` column. This skips phase 1, which is fragile on the
/// clustered Vandermonde rows of strongly graded partitions.
fn start_basis(prob: &NearBestProblem) -> Option<Vec<usize>> {
    let k = prob.ncols();
    let rows = prob.matrix.len();
    if rows > k {
        return None;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&s| (prob.offsets[s].unsigned_abs(), prob.offsets[s]));
    let mut cols = order[..rows].to_vec();
    cols.sort_unstable();
    let a_b: Vec<Vec<f64>> = prob
        .matrix
        .iter()
        .map(|row| cols.iter().map(|&c| row[c]).collect())
        .collect();
    let w = dense::solve(a_b, prob.rhs.clone())?;
    Some(
        cols.iter()
            .zip(&w)
            .map(|(&c, v)| if *v >= 0.0 { c } else { k + c })
            .collect(),
    )
}

/// Re-solves the optimal vertex directly: `A_B w_B = b` for the weights and
/// `A_Bᵀ y = sign(w_B)` for the multipliers. The tableau accumulates
/// rounding on clustered nodes; a pivoted solve on the final basis does not.
fn refine(prob: &NearBestProblem, basis: &[usize], tableau_w: &[f64]) -> Option<(Vec<f64>, Option<Vec<f64>>)> {
    let k = prob.ncols();
    let cols: Vec<usize> = basis.iter().map(|&b| if b < 2 * k { b % k } else { usize::MAX }).collect();
    if cols.contains(&usize::MAX) {
        return None;
    }
    let a_b: Vec<Vec<f64>> = prob
        .matrix
        .iter()
        .map(|row| cols.iter().map(|&c| row[c]).collect())
        .collect();
    let w_b = dense::solve(a_b.clone(), prob.rhs.clone())?;
    let mut w = vec![0.0; k];
    for (&c, v) in cols.iter().zip(&w_b) {
        w[c] = *v;
    }
    // Multipliers need every basic weight to carry a sign.
    let scale = tableau_w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let y = if w_b.iter().all(|v| v.abs() > 1e-12 * scale) {
        let a_t: Vec<Vec<f64>> = (0..cols.len()).map(|j| a_b.iter().map(|row| row[j]).collect()).collect();
        dense::solve(a_t, w_b.iter().map(|v| v.signum()).collect())
    } else {
        None
    };
    Some((w, y))
}

/// Which cardinal family a symmetric uniform problem belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniformKind {
    /// `a_0 f(i) + Σ a_j (f(i+j) + f(i−j))`.
    Discrete,
    /// `a_0 ⟨f, M_i⟩ + Σ a_j (⟨f, M_{i−j}⟩ + ⟨f, M_{i+j}⟩)`.
    Integral,
}

/// Symmetric near-best weights `(a_0, ..., a_n)` of a cardinal family.
#[derive(Debug, Clone)]
pub struct SymmetricSolution {
    pub a: Vec<f64>,
    /// `|a_0| + 2 Σ_{j>=1} |a_j|`.
    pub nu: f64,
}

impl SymmetricSolution {
    /// Full stencil `λ(−n), ..., λ(n)`.
    pub fn stencil(&self) -> Vec<f64> {
        let n = self.a.len() - 1;
        (0..=2 * n)
            .map(|k| self.a[(k as i64 - n as i64).unsigned_abs() as usize])
            .collect()
    }
}

fn check_order(order: usize, r: usize) -> Result<usize> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "cardinal order must be even and >= 2 (got {order})"
        )));
    }
    let degree = order - 1;
    if r > degree {
        return Err(Error::OrderTooLarge { r, m: degree });
    }
    Ok(degree)
}

/// Centred cardinal B-spline of the given order, translated by `shift`,
/// as a unit-integral density.
pub(crate) fn cardinal_density(order: usize, shift: f64) -> NormalizedBSpline {
    let half = order as f64 / 2.0;
    NormalizedBSpline::new((0..=order).map(|k| k as f64 - half + shift).collect())
        .expect("cardinal knots are increasing")
}

/// B-coefficient of `(x/scale)^k` at a centred cardinal index.
fn cardinal_target(order: usize, k: usize, scale: f64) -> f64 {
    let degree = order - 1;
    let half = (degree as f64 - 1.0) / 2.0;
    let window: Vec<f64> = (0..degree).map(|s| s as f64 - half).collect();
    symmetric_of_window(&window, k, 0.0, scale)
}

fn uniform_node(kind: UniformKind, order: usize, at: f64) -> Node {
    match kind {
        UniformKind::Discrete => Node::Point(at),
        UniformKind::Integral => Node::Density(cardinal_density(order, at)),
    }
}

impl NearBestProblem {
    /// Full (non-symmetrized) cardinal problem with offsets `−n..=n` and
    /// exactness up to degree `r`.
    pub fn uniform(order: usize, n: usize, r: usize, kind: UniformKind) -> Result<Self> {
        check_order(order, r)?;
        if n == 0 {
            return Err(Error::InvalidParameter("stencil half-width n must be >= 1".into()));
        }
        let scale = n as f64;
        let offsets: Vec<i64> = (-(n as i64)..=n as i64).collect();
        let nodes = offsets
            .iter()
            .map(|&s| uniform_node(kind, order, s as f64))
            .collect();
        let targets = (0..=r).map(|k| cardinal_target(order, k, scale)).collect();
        Self::from_nodes(0, offsets, nodes, targets, 0.0, scale)
    }
}

/// Near-best symmetric weights of the cardinal dQI / iQI of even order
/// `order` with stencil half-width `n`, exact on `Π_r`.
///
/// Odd-degree constraints vanish by symmetry; with `b_0 = a_0`, `b_j = 2a_j`
/// the remaining system is again an l1 problem.
pub fn solve_symmetric_uniform(order: usize, n: usize, r: usize, kind: UniformKind) -> Result<SymmetricSolution> {
    check_order(order, r)?;
    if n == 0 {
        return Err(Error::InvalidParameter("stencil half-width n must be >= 1".into()));
    }
    let scale = n as f64;
    let even: Vec<usize> = (0..=r).filter(|k| k % 2 == 0).collect();
    if even.len() > n + 1 {
        return Err(Error::Infeasible);
    }
    let cols: Vec<(Node, Option<Node>)> = (0..=n)
        .map(|j| {
            let plus = uniform_node(kind, order, j as f64);
            let minus = (j > 0).then(|| uniform_node(kind, order, -(j as f64)));
            (plus, minus)
        })
        .collect();
    let matrix: Vec<Vec<f64>> = even
        .iter()
        .map(|&k| {
            cols.iter()
                .map(|(plus, minus)| match minus {
                    None => plus.monomial(k, 0.0, scale),
                    Some(mn) => 0.5 * (plus.monomial(k, 0.0, scale) + mn.monomial(k, 0.0, scale)),
                })
                .collect()
        })
        .collect();
    let targets: Vec<f64> = even.iter().map(|&k| cardinal_target(order, k, scale)).collect();
    let prob = NearBestProblem {
        anchor: 0,
        offsets: (0..=n as i64).collect(),
        nodes: cols.into_iter().map(|(p, _)| p).collect(),
        matrix,
        rhs: targets,
        q: r,
        center: 0.0,
        scale,
    };
    let sol = solve_l1(&prob)?;
    let a: Vec<f64> = sol
        .weights
        .iter()
        .enumerate()
        .map(|(j, b)| if j == 0 { *b } else { 0.5 * b })
        .collect();
    Ok(SymmetricSolution { a, nu: sol.nu })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_system_is_interpolation() {
        // q + 1 = 2p + 1: three nodes, exact on Π_2, no freedom left
        let ks = KnotSequence::clamped(2, &[0.0, 1.0, 3.0, 4.0, 6.0, 7.0]).unwrap();
        let prob = NearBestProblem::discrete(&ks, 3, 1, 2).unwrap();
        let sol = solve_l1(&prob).unwrap();
        let th: Vec<f64> = (2..=4).map(|k| ks.greville(k).unwrap()).collect();
        let lam = ks.lambda(3).unwrap();
        let (d0, d1) = (th[1] - th[0], th[2] - th[1]);
        let want = [
            -lam / (d0 * (d0 + d1)),
            1.0 + lam / (d0 * d1),
            -lam / (d1 * (d0 + d1)),
        ];
        for (g, w) in sol.weights.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn cubic_dqi_closed_form() {
        for n in 2..=6 {
            let s = solve_symmetric_uniform(4, n, 3, UniformKind::Discrete).unwrap();
            let nf = (n * n) as f64;
            assert!((s.a[0] - (1.0 + 1.0 / (3.0 * nf))).abs() < 1e-12);
            assert!((s.a[n] + 1.0 / (6.0 * nf)).abs() < 1e-12);
            for j in 1..n {
                assert!(s.a[j].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn linear_exactness_needs_only_center() {
        for n in 1..=4 {
            let s = solve_symmetric_uniform(4, n, 1, UniformKind::Discrete).unwrap();
            assert!((s.a[0] - 1.0).abs() < 1e-14);
            assert!((s.nu - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn infeasible_when_stencil_too_short() {
        // degree 5 exactness needs three even constraints, n=1 offers two unknowns
        assert!(matches!(
            solve_symmetric_uniform(6, 1, 5, UniformKind::Discrete),
            Err(Error::Infeasible)
        ));
        assert!(solve_symmetric_uniform(3, 2, 1, UniformKind::Discrete).is_err());
        assert!(solve_symmetric_uniform(4, 2, 4, UniformKind::Discrete).is_err());
    }

    #[test]
    fn stencil_is_symmetric() {
        let s = SymmetricSolution {
            a: vec![1.5, 0.0, -0.25],
            nu: 2.0,
        };
        assert_eq!(s.stencil(), vec![-0.25, 0.0, 1.5, 0.0, -0.25]);
    }

    #[test]
    fn discrete_rejects_bad_parameters() {
        let ks = KnotSequence::clamped(2, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!(NearBestProblem::discrete(&ks, 3, 2, 3).is_err());
        assert!(NearBestProblem::discrete(&ks, 0, 2, 2).is_err());
        assert!(NearBestProblem::discrete(&ks, 3, 1, 2).is_ok());
    }
}
