//! Constructors for the univariate quasi-interpolant families.

use crate::error::{Error, Result};
use crate::functionals::{CoefficientFunctional, Family, FunctionalKind, Node, QuasiInterpolant};
use crate::nearbest::{self, dense, L1Solution, NearBestProblem, UniformKind};
use crate::splinecore::{KnotLayout, KnotSequence, NormalizedBSpline};

/// Spans of the default uniform emulation used for the cardinal families.
pub const UNIFORM_SPANS: usize = 50;

fn require_degree(ks: &KnotSequence, min: usize, what: &'static str) -> Result<()> {
    if ks.degree() < min {
        return Err(Error::UnsupportedDegree {
            m: ks.degree(),
            reason: what,
        });
    }
    Ok(())
}

fn require_clamped(ks: &KnotSequence) -> Result<()> {
    if ks.layout() != KnotLayout::Clamped {
        return Err(Error::InvalidKnots(
            "this family needs a clamped knot sequence".into(),
        ));
    }
    Ok(())
}

/// Greville point of index `k`, extended past the ends for uniform emulations.
fn node_point(ks: &KnotSequence, k: i64) -> Option<f64> {
    if k >= 0 && (k as usize) < ks.len() {
        return ks.greville(k as usize).ok();
    }
    ks.uniform_step()?;
    ks.extended_greville(k)
}

/// Weights of `[x0, x1, x2] f`.
fn second_divided_difference(x: [f64; 3]) -> [f64; 3] {
    [
        1.0 / ((x[0] - x[1]) * (x[0] - x[2])),
        1.0 / ((x[1] - x[0]) * (x[1] - x[2])),
        1.0 / ((x[2] - x[0]) * (x[2] - x[1])),
    ]
}

/// Schoenberg's operator `S_1 f = Σ f(θ_j) B_j`, exact on `Π_1`.
pub fn schoenberg(ks: &KnotSequence) -> Result<QuasiInterpolant> {
    let functionals = (0..ks.len())
        .map(|j| Ok(CoefficientFunctional::point(j as i64, ks.greville(j)?)))
        .collect::<Result<Vec<_>>>()?;
    QuasiInterpolant::new(ks.clone(), functionals, 1, Family::Schoenberg)
}

/// `S_2`: `μ_j(f) = f(θ_j) − λ_j [θ_{j−1}, θ_j, θ_{j+1}] f`, exact on `Π_2`.
///
/// Where a neighbour Greville point is missing, the second divided
/// difference is taken one-sided on the three nearest points.
pub fn s2(ks: &KnotSequence) -> Result<QuasiInterpolant> {
    require_degree(ks, 2, "S2 needs lambda_j, defined for m >= 2")?;
    let n = ks.len() as i64;
    if n < 3 {
        return Err(Error::InvalidKnots("S2 needs at least three basis functions".into()));
    }
    let mut functionals = Vec::with_capacity(ks.len());
    for j in 0..n {
        let centred = [-1i64, 0, 1];
        let offsets: [i64; 3] = if centred.iter().all(|s| node_point(ks, j + s).is_some()) {
            centred
        } else if j == 0 {
            [0, 1, 2]
        } else {
            [-2, -1, 0]
        };
        let xs = offsets.map(|s| node_point(ks, j + s).expect("stencil inside range"));
        if xs[1] <= xs[0] || xs[2] <= xs[1] {
            return Err(Error::CoincidentNodes(j));
        }
        let lambda = ks.lambda(j as usize)?;
        let dd = second_divided_difference(xs);
        let weights: Vec<f64> = offsets
            .iter()
            .zip(dd)
            .map(|(&s, d)| if s == 0 { 1.0 } else { 0.0 } - lambda * d)
            .collect();
        functionals.push(CoefficientFunctional::new(
            FunctionalKind::Discrete,
            j,
            offsets.to_vec(),
            weights,
            xs.iter().map(|&x| Node::Point(x)).collect(),
        )?);
    }
    QuasiInterpolant::new(ks.clone(), functionals, 2, Family::S2)
}

/// Goodman–Sharma node `k`: point evaluations at the ends, the unit-integral
/// degree `m−2` dual density inside.
fn gs_node(ks: &KnotSequence, k: usize) -> Result<Node> {
    let (a, b) = ks.domain();
    if k == 0 {
        Ok(Node::Point(a))
    } else if k + 1 == ks.len() {
        Ok(Node::Point(b))
    } else {
        Ok(Node::Density(ks.dual_density(k)?))
    }
}

/// Goodman–Sharma iQI `G_1`, exact on `Π_1` with norm one.
pub fn gs1(ks: &KnotSequence) -> Result<QuasiInterpolant> {
    require_degree(ks, 2, "Goodman-Sharma duals have degree m-2")?;
    require_clamped(ks)?;
    let functionals = (0..ks.len())
        .map(|k| {
            CoefficientFunctional::new(
                FunctionalKind::IntegralDualSpline,
                k as i64,
                vec![0],
                vec![1.0],
                vec![gs_node(ks, k)?],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    QuasiInterpolant::new(ks.clone(), functionals, 1, Family::Gs1)
}

/// `(a_i, b_i, c_i)` of `G_2` at interior index `i`, from the three
/// exactness equations on `e_0, e_1, e_2`.
pub fn gs2_weights(ks: &KnotSequence, i: usize) -> Result<[f64; 3]> {
    if i == 0 || i + 1 >= ks.len() {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            lo: 1,
            hi: ks.len() as i64 - 2,
        });
    }
    let nodes = [gs_node(ks, i - 1)?, gs_node(ks, i)?, gs_node(ks, i + 1)?];
    let center = ks.greville(i)?;
    let scale = 0.5 * (ks.greville(i + 1)? - ks.greville(i - 1)?);
    if !(scale > 0.0) {
        return Err(Error::CoincidentNodes(i as i64));
    }
    let a: Vec<Vec<f64>> = (0..3)
        .map(|r| nodes.iter().map(|n| n.monomial(r, center, scale)).collect())
        .collect();
    let b = (0..3)
        .map(|r| ks.symmetric_coeff_shifted(i, r, center, scale))
        .collect::<Result<Vec<_>>>()?;
    let x = dense::solve(a, b).ok_or(Error::Singular(i as i64))?;
    Ok([x[0], x[1], x[2]])
}

/// Goodman–Sharma type iQI `G_2`, exact on `Π_2`.
pub fn gs2(ks: &KnotSequence) -> Result<QuasiInterpolant> {
    require_degree(ks, 2, "Goodman-Sharma duals have degree m-2")?;
    require_clamped(ks)?;
    let n = ks.len();
    if n < 3 {
        return Err(Error::InvalidKnots("G2 needs an interior index".into()));
    }
    let mut functionals = Vec::with_capacity(n);
    for k in 0..n {
        let lam = if k == 0 || k + 1 == n {
            CoefficientFunctional::new(
                FunctionalKind::IntegralDualSpline,
                k as i64,
                vec![0],
                vec![1.0],
                vec![gs_node(ks, k)?],
            )?
        } else {
            let w = gs2_weights(ks, k)?;
            CoefficientFunctional::new(
                FunctionalKind::IntegralDualSpline,
                k as i64,
                vec![-1, 0, 1],
                w.to_vec(),
                vec![gs_node(ks, k - 1)?, gs_node(ks, k)?, gs_node(ks, k + 1)?],
            )?
        };
        functionals.push(lam);
    }
    QuasiInterpolant::new(ks.clone(), functionals, 2, Family::Gs2)
}

/// Closed-form quadratic `G_2` weight `a_i` from the spans around index `i`
/// (spans `h_{i−1}, h_i, h_{i+1}`, with zero-length spans at clamped ends).
pub fn gs2_quadratic_closed_form(h_prev: f64, h: f64, h_next: f64) -> [f64; 3] {
    let a = -h * h / ((h_prev + h) * (h_prev + h + h_next));
    let c = -h * h / ((h_prev + h + h_next) * (h + h_next));
    [a, 1.0 - a - c, c]
}

fn uniform_setup(ks: &KnotSequence, n: usize) -> Result<usize> {
    if ks.uniform_step().is_none() {
        return Err(Error::InvalidKnots(
            "cardinal families need a uniform emulation sequence".into(),
        ));
    }
    let order = ks.degree() + 1;
    if !order.is_multiple_of(2) {
        return Err(Error::UnsupportedDegree {
            m: ks.degree(),
            reason: "cardinal families use even order 2m (odd degree)",
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("stencil half-width n must be >= 1".into()));
    }
    Ok(order)
}

/// Symmetric weights `(a_0, ..., a_n)` for a cardinal family: the cubic
/// closed forms when `order = 4, r = 3`, the l1 solver otherwise.
pub fn cardinal_weights(order: usize, n: usize, r: usize, kind: UniformKind) -> Result<Vec<f64>> {
    if order == 4 && r == 3 {
        let nn = (n * n) as f64;
        let (a0, an) = match kind {
            UniformKind::Discrete => (1.0 + 1.0 / (3.0 * nn), -1.0 / (6.0 * nn)),
            UniformKind::Integral => (1.0 + 2.0 / (3.0 * nn), -1.0 / (3.0 * nn)),
        };
        let mut a = vec![0.0; n + 1];
        a[0] = a0;
        a[n] += an;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        return Ok(a);
    }
    Ok(nearbest::solve_symmetric_uniform(order, n, r, kind)?.a)
}

fn cardinal_qi(ks: &KnotSequence, n: usize, r: usize, kind: UniformKind) -> Result<QuasiInterpolant> {
    let order = uniform_setup(ks, n)?;
    if r > ks.degree() {
        return Err(Error::OrderTooLarge { r, m: ks.degree() });
    }
    let a = cardinal_weights(order, n, r, kind)?;
    let ni = n as i64;
    let offsets: Vec<i64> = (-ni..=ni).collect();
    let weights: Vec<f64> = offsets.iter().map(|s| a[s.unsigned_abs() as usize]).collect();
    let mut functionals = Vec::with_capacity(ks.len());
    for j in 0..ks.len() as i64 {
        let nodes = offsets
            .iter()
            .map(|s| {
                let k = j + s;
                match kind {
                    UniformKind::Discrete => Node::Point(
                        ks.extended_greville(k).expect("uniform emulation extends"),
                    ),
                    UniformKind::Integral => {
                        let knots = (0..=order as i64)
                            .map(|t| ks.extended_knot(k + t).expect("uniform emulation extends"))
                            .collect();
                        Node::Density(NormalizedBSpline::new(knots).expect("uniform knots"))
                    }
                }
            })
            .collect();
        let fk = match kind {
            UniformKind::Discrete => FunctionalKind::Discrete,
            UniformKind::Integral => FunctionalKind::IntegralDualSpline,
        };
        functionals.push(CoefficientFunctional::new(fk, j, offsets.clone(), weights.clone(), nodes)?);
    }
    let family = match kind {
        UniformKind::Discrete => Family::UniformNbDqi { order, n, r },
        UniformKind::Integral => Family::UniformNbIqi { order, n, r },
    };
    QuasiInterpolant::new(ks.clone(), functionals, r, family)
}

/// Near-best cardinal dQI of order `order` (degree `order−1`) with
/// `Λf(i) = a_0 f(i) + Σ_{j<=n} a_j (f(i+j) + f(i−j))`, exact on `Π_r`, on
/// the default uniform emulation.
pub fn uniform_nb_dqi(order: usize, n: usize, r: usize) -> Result<QuasiInterpolant> {
    let ks = KnotSequence::uniform_emulation(order.saturating_sub(1).max(1), UNIFORM_SPANS, 1.0)?;
    uniform_nb_dqi_on(&ks, n, r)
}

pub fn uniform_nb_dqi_on(ks: &KnotSequence, n: usize, r: usize) -> Result<QuasiInterpolant> {
    cardinal_qi(ks, n, r, UniformKind::Discrete)
}

/// Near-best cardinal iQI with moments `⟨f, M_{i±j}⟩` against the cardinal
/// B-splines themselves.
pub fn uniform_nb_iqi(order: usize, n: usize, r: usize) -> Result<QuasiInterpolant> {
    let ks = KnotSequence::uniform_emulation(order.saturating_sub(1).max(1), UNIFORM_SPANS, 1.0)?;
    uniform_nb_iqi_on(&ks, n, r)
}

pub fn uniform_nb_iqi_on(ks: &KnotSequence, n: usize, r: usize) -> Result<QuasiInterpolant> {
    cardinal_qi(ks, n, r, UniformKind::Integral)
}

/// Whether index `k` has a Greville window free of repeated end knots.
pub fn is_regular_index(ks: &KnotSequence, k: i64) -> bool {
    match ks.layout() {
        KnotLayout::Open => true,
        KnotLayout::Clamped => {
            let m = ks.degree() as i64;
            k >= m - 1 && k <= ks.len() as i64 - m
        }
    }
}

/// Near-best solution at one anchor of `Q_{p,q}`.
#[derive(Debug, Clone)]
pub struct AnchorSolution {
    pub functional: CoefficientFunctional,
    pub solution: L1Solution,
    /// `true` when the centred stencil `|s| <= p` was used.
    pub centred: bool,
    /// `true` when all stencil nodes are regular Greville points.
    pub regular: bool,
}

/// Solves the near-best problem at anchor `i`, falling back to the nearest
/// window of `2p+1` consecutive Greville points at the ends.
pub fn near_best_anchor(ks: &KnotSequence, i: usize, p: usize, q: usize) -> Result<AnchorSolution> {
    let len = ks.len();
    let (prob, centred) = match NearBestProblem::discrete(ks, i, p, q) {
        Ok(prob) => (prob, true),
        Err(Error::IndexOutOfRange { .. }) => {
            let count = (2 * p + 1).min(len);
            let first = i.saturating_sub(p).min(len - count);
            (NearBestProblem::windowed(ks, i, first, count, q)?, false)
        }
        Err(e) => return Err(e),
    };
    let solution = nearbest::solve_l1(&prob)?;
    let regular = prob
        .offsets()
        .iter()
        .all(|s| is_regular_index(ks, i as i64 + s));
    let functional = CoefficientFunctional::new(
        FunctionalKind::Discrete,
        i as i64,
        prob.offsets().to_vec(),
        solution.weights.clone(),
        prob.nodes().to_vec(),
    )?;
    Ok(AnchorSolution {
        functional,
        solution,
        centred,
        regular,
    })
}

/// `Q_{p,q}` with l1-optimal weights at every anchor.
pub fn near_best_dqi(ks: &KnotSequence, p: usize, q: usize) -> Result<QuasiInterpolant> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be >= 1".into()));
    }
    let functionals = (0..ks.len())
        .map(|i| Ok(near_best_anchor(ks, i, p, q)?.functional))
        .collect::<Result<Vec<_>>>()?;
    QuasiInterpolant::new(ks.clone(), functionals, q, Family::NearBest { p, q })
}

/// Checks `θ_{i−1}+θ_i <= θ_{i−p}+θ_{i+p} <= θ_i+θ_{i+1}` wherever the
/// centred stencil exists.
pub fn check_q2_admissible(ks: &KnotSequence, p: usize) -> Result<()> {
    let th = ks.greville_points();
    let n = th.len();
    let (a, b) = ks.domain();
    let tol = 1e-12 * (b - a);
    for i in p..n.saturating_sub(p) {
        let outer = th[i - p] + th[i + p];
        if outer < th[i - 1] + th[i] - tol || outer > th[i] + th[i + 1] + tol {
            return Err(Error::Inadmissible { index: i });
        }
    }
    Ok(())
}

/// Closed-form optimal weights `(λ(−p), λ(0), λ(p))` of the quadratic
/// `Q*_{p,2}` at anchor `i`: `f(θ_i) − λ_i [θ_{i−p}, θ_i, θ_{i+p}] f`.
pub fn q2_closed_form(ks: &KnotSequence, i: usize, p: usize) -> Result<[f64; 3]> {
    if i < p || i + p >= ks.len() {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            lo: p as i64,
            hi: ks.len() as i64 - 1 - p as i64,
        });
    }
    let lm = ks.greville(i - p)?;
    let l0 = ks.greville(i)?;
    let lp = ks.greville(i + p)?;
    let left = l0 - lm;
    let right = lp - l0;
    if !(left > 0.0 && right > 0.0) {
        return Err(Error::CoincidentNodes(i as i64));
    }
    let lambda = ks.lambda(i)?;
    let total = left + right;
    Ok([
        -lambda / (left * total),
        1.0 + lambda / (left * right),
        -lambda / (right * total),
    ])
}

/// The quadratic near-best dQI `Q*_{p,2}` on an admissible partition:
/// closed form at anchors with a centred stencil, l1 solution at the ends.
pub fn nb_dqi_nonuniform(ks: &KnotSequence, p: usize) -> Result<QuasiInterpolant> {
    if ks.degree() != 2 {
        return Err(Error::UnsupportedDegree {
            m: ks.degree(),
            reason: "the closed-form Q*(p,2) is quadratic",
        });
    }
    if p < 2 {
        return Err(Error::InvalidParameter("Q*(p,2) needs p >= 2".into()));
    }
    check_q2_admissible(ks, p)?;
    let len = ks.len();
    let mut functionals = Vec::with_capacity(len);
    for i in 0..len {
        if i >= p && i + p < len {
            let w = q2_closed_form(ks, i, p)?;
            let pi = p as i64;
            functionals.push(CoefficientFunctional::new(
                FunctionalKind::Discrete,
                i as i64,
                vec![-pi, 0, pi],
                w.to_vec(),
                vec![
                    Node::Point(ks.greville(i - p)?),
                    Node::Point(ks.greville(i)?),
                    Node::Point(ks.greville(i + p)?),
                ],
            )?);
        } else {
            functionals.push(near_best_anchor(ks, i, p, 2)?.functional);
        }
    }
    QuasiInterpolant::new(ks.clone(), functionals, 2, Family::QStarP2 { p })
}
