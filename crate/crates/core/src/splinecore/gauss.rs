//! Gauss–Legendre rules on `[-1, 1]`, computed once and cached.

use std::sync::OnceLock;

const MAX_POINTS: usize = 64;

/// Nodes and weights of an `n`-point rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn compute(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cached `n`-point rule, `1 <= n <= 64`.
pub fn rule(n: usize) -> &'static GaussRule {
    static TABLE: OnceLock<Vec<GaussRule>> = OnceLock::new();
    let table = TABLE.get_or_init(|| (0..=MAX_POINTS).map(|k| compute(k.max(1))).collect());
    assert!(
        (1..=MAX_POINTS).contains(&n),
        "Gauss-Legendre rule with {n} points not tabulated"
    );
    &table[n]
}

/// Smallest point count exact for polynomials of degree `degree`.
pub fn points_for_degree(degree: usize) -> usize {
    degree / 2 + 1
}

/// Integrates `f` over `[lo, hi]` with an `n`-point rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
    let r = rule(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    r.nodes
        .iter()
        .zip(&r.weights)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in 1..=40 {
            let s: f64 = rule(n).weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_on_polynomials_up_to_2n_minus_1() {
        for n in 1..=12 {
            for d in 0..=(2 * n - 1) {
                let got = integrate(|x| x.powi(d as i32), 0.0, 1.0, n);
                let want = 1.0 / (d as f64 + 1.0);
                assert!((got - want).abs() < 1e-14, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn points_for_degree_is_exact() {
        for d in 0..20 {
            let n = points_for_degree(d);
            let got = integrate(|x| x.powi(d as i32), -0.3, 1.7, n);
            let want = (1.7f64.powi(d as i32 + 1) - (-0.3f64).powi(d as i32 + 1)) / (d as f64 + 1.0);
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }
}
