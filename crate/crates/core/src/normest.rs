//! Operator-norm machinery: the `ν` upper bound and sampled lower estimates
//! of `‖Q‖_∞` from the Lebesgue function.

use crate::error::{Error, Result};
use crate::functionals::{Node, QuasiInterpolant};
use crate::splinecore::gauss;

/// Smallest accepted sampling density.
pub const MIN_SAMPLES_PER_SPAN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    pub samples_per_span: usize,
    /// Refine the grid maximum with a golden-section search.
    pub polish: bool,
    /// Sign samples per kernel piece used to bracket roots.
    pub root_samples: usize,
    /// Allowed mismatch between the signed kernel integral and the summed
    /// node weights.
    pub quad_tolerance: f64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            samples_per_span: 64,
            polish: true,
            root_samples: 8,
            quad_tolerance: 1e-9,
        }
    }
}

/// A sampled norm. Always a lower estimate of the true norm.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub argmax: f64,
    pub samples: usize,
    pub lower_estimate: bool,
}

/// `max_j ν(Λ_j)`.
pub fn nu_bound(q: &QuasiInterpolant) -> f64 {
    q.nu_bound()
}

/// `Σ_γ |w_γ(x)|`, treating every node as a point evaluation.
pub fn lebesgue_discrete(q: &QuasiInterpolant, x: f64) -> Result<f64> {
    Ok(q.node_weights_at(x)?.iter().map(|(_, w)| w.abs()).sum())
}

/// `∫ |K(x, t)| dt` plus the absolute weights of point nodes, where
/// `K(x, ·) = Σ_γ w_γ(x) ρ_γ` over the density nodes.
pub fn lebesgue_integral(q: &QuasiInterpolant, x: f64, opts: &NormOptions) -> Result<f64> {
    let weights = q.node_weights_at(x)?;
    let table = q.node_table();
    let mut point_part = 0.0;
    let mut dens = Vec::new();
    for (key, w) in &weights {
        match table[key] {
            Node::Point(_) => point_part += w.abs(),
            Node::Density(d) => dens.push((*w, d)),
        }
    }
    if dens.is_empty() {
        return Ok(point_part);
    }
    let mut breaks: Vec<f64> = dens.iter().flat_map(|(_, d)| d.knots().iter().copied()).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let degree = dens.iter().map(|(_, d)| d.degree()).max().unwrap_or(0);
    let npts = gauss::points_for_degree(degree);
    let kernel = |t: f64| dens.iter().map(|(w, d)| w * d.eval(t)).sum::<f64>();

    let mut abs_total = 0.0;
    let mut signed_total = 0.0;
    let ns = opts.root_samples.max(degree + 2);
    for piece in breaks.windows(2) {
        let (lo, hi) = (piece[0], piece[1]);
        if hi <= lo {
            continue;
        }
        // Interior samples; the kernel is polynomial on the open piece.
        let ts: Vec<f64> = (0..ns)
            .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / ns as f64)
            .collect();
        let vals: Vec<f64> = ts.iter().map(|&t| kernel(t)).collect();
        let mut cuts = vec![lo];
        for k in 0..ns - 1 {
            if vals[k] * vals[k + 1] < 0.0 {
                cuts.push(bisect_root(&kernel, ts[k], ts[k + 1], vals[k]));
            }
        }
        cuts.push(hi);
        for c in cuts.windows(2) {
            let v = gauss::integrate(kernel, c[0], c[1], npts);
            abs_total += v.abs();
            signed_total += v;
        }
    }
    let expected: f64 = dens.iter().map(|(w, _)| w).sum();
    let spread = (signed_total - expected).abs();
    if spread > opts.quad_tolerance * abs_total.max(1.0) {
        return Err(Error::Quadrature {
            tolerance: opts.quad_tolerance,
            spread,
        });
    }
    Ok(abs_total + point_part)
}

fn bisect_root<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let sign_lo = flo.signum();
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid).signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sample abscissae: `samples_per_span` equal steps on every knot span
/// inside the evaluation window (span ends included).
pub fn sample_grid(q: &QuasiInterpolant, samples_per_span: usize) -> Result<Vec<f64>> {
    if samples_per_span < MIN_SAMPLES_PER_SPAN {
        return Err(Error::InvalidParameter(format!(
            "grid density {samples_per_span} below {MIN_SAMPLES_PER_SPAN} samples per span"
        )));
    }
    let (lo, hi) = q.knots().evaluation_window();
    let mut edges: Vec<f64> = q
        .knots()
        .breakpoints()
        .into_iter()
        .filter(|&x| x > lo && x < hi)
        .collect();
    edges.insert(0, lo);
    edges.push(hi);
    let mut xs = Vec::with_capacity(edges.len() * samples_per_span);
    for e in edges.windows(2) {
        for k in 0..samples_per_span {
            xs.push(e[0] + (e[1] - e[0]) * k as f64 / samples_per_span as f64);
        }
    }
    xs.push(hi);
    Ok(xs)
}

fn sampled_max<F: Fn(f64) -> Result<f64>>(
    q: &QuasiInterpolant,
    opts: &NormOptions,
    lebesgue: F,
) -> Result<NormEstimate> {
    let xs = sample_grid(q, opts.samples_per_span)?;
    let mut best = (f64::NEG_INFINITY, xs[0], 0usize);
    for (k, &x) in xs.iter().enumerate() {
        let v = lebesgue(x)?;
        if v > best.0 {
            best = (v, x, k);
        }
    }
    let (mut value, mut argmax, k) = best;
    if opts.polish {
        let lo = xs[k.saturating_sub(1)];
        let hi = xs[(k + 1).min(xs.len() - 1)];
        if hi > lo {
            let (x, v) = golden_max(&lebesgue, lo, hi)?;
            if v > value {
                value = v;
                argmax = x;
            }
        }
    }
    Ok(NormEstimate {
        value,
        argmax,
        samples: xs.len(),
        lower_estimate: true,
    })
}

fn golden_max<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..60 {
        if (b - a).abs() < 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd { (c, fc) } else { (d, fd) })
}

/// Maximum of the discrete Lebesgue function over the sample grid.
pub fn empirical_norm_discrete(q: &QuasiInterpolant, opts: &NormOptions) -> Result<NormEstimate> {
    if !q.is_discrete() {
        return Err(Error::NotDiscrete);
    }
    sampled_max(q, opts, |x| lebesgue_discrete(q, x))
}

/// Maximum over the sample grid of `∫ |K(x, t)| dt`.
pub fn empirical_norm_integral(q: &QuasiInterpolant, opts: &NormOptions) -> Result<NormEstimate> {
    sampled_max(q, opts, |x| lebesgue_integral(q, x, opts))
}

/// Maximum over the sample grid of `Σ_γ |w_γ(x)|` for any family: the norm
/// of `Q` seen as a map from node values, an upper bound for integral
/// families whose densities have unit mass.
pub fn empirical_norm_skeleton(q: &QuasiInterpolant, opts: &NormOptions) -> Result<NormEstimate> {
    sampled_max(q, opts, |x| lebesgue_discrete(q, x))
}

/// Dispatches on the functional kind.
pub fn empirical_norm(q: &QuasiInterpolant, opts: &NormOptions) -> Result<NormEstimate> {
    if q.is_discrete() {
        empirical_norm_discrete(q, opts)
    } else {
        empirical_norm_integral(q, opts)
    }
}

/// `(1 + ν(Q)) d` for a distance estimate `d` to the spline space.
pub fn error_bound(q: &QuasiInterpolant, distance: f64) -> f64 {
    (1.0 + nu_bound(q)) * distance
}

/// `max |f − Qf|` over the sample grid, a crude upper estimate of the
/// distance from `f` to the spline space.
pub fn sampled_error<F: Fn(f64) -> f64>(
    q: &QuasiInterpolant,
    f: F,
    samples_per_span: usize,
) -> Result<f64> {
    let coeffs = q.coefficients(&f)?;
    let mut worst = 0.0f64;
    for x in sample_grid(q, samples_per_span)? {
        worst = worst.max((f(x) - q.knots().eval_spline(&coeffs, x)?).abs());
    }
    Ok(worst)
}
