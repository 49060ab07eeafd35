//! The C¹ quadratic four-direction box spline (ZP element) and the
//! Lebesgue function of near-best stencils built on it.

use super::NbBoxCoeffs;
use crate::error::{Error, Result};

/// Area of the convex polygon `{(t, u) ∈ [0,1]² : 0 <= x1−t−u <= 1,
/// 0 <= x2−t+u <= 1}`, i.e. the box spline with directions
/// `(1,0), (0,1), (1,1), (1,−1)` at `(x1, x2)`.
fn box_volume(x1: f64, x2: f64) -> f64 {
    let mut poly = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    // half-planes a·t + b·u <= c
    let planes = [
        (1.0, 1.0, x1),
        (-1.0, -1.0, 1.0 - x1),
        (1.0, -1.0, x2),
        (-1.0, 1.0, 1.0 - x2),
    ];
    for (a, b, c) in planes {
        poly = clip(&poly, a, b, c);
        if poly.len() < 3 {
            return 0.0;
        }
    }
    let n = poly.len();
    let twice: f64 = (0..n)
        .map(|k| {
            let (p, q) = (poly[k], poly[(k + 1) % n]);
            p.0 * q.1 - q.0 * p.1
        })
        .sum();
    0.5 * twice.abs()
}

/// Sutherland–Hodgman step against `a t + b u <= c`.
fn clip(poly: &[(f64, f64)], a: f64, b: f64, c: f64) -> Vec<(f64, f64)> {
    let inside = |p: (f64, f64)| a * p.0 + b * p.1 <= c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let p = poly[k];
        let q = poly[(k + 1) % poly.len()];
        let (fp, fq) = (a * p.0 + b * p.1 - c, a * q.0 + b * q.1 - c);
        if inside(p) {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let s = fp / (fp - fq);
            out.push((p.0 + s * (q.0 - p.0), p.1 + s * (q.1 - p.1)));
        }
    }
    out
}

/// The ZP element centred at the origin: `φ(0) = 1/2`, `φ(±1, 0) = 1/8`,
/// supported on the octagon `|x|, |y| <= 3/2`, `|x| + |y| <= 2`.
pub fn eval_zp_box(x: f64, y: f64) -> f64 {
    box_volume(x + 1.5, y + 0.5)
}

/// `Σ_γ |Σ_α φ(p − α) c(γ − α)|` at `p` for the stencil `c`.
pub fn four_direction_lebesgue(coeffs: &NbBoxCoeffs, px: f64, py: f64) -> f64 {
    let stencil = coeffs.stencil();
    let reach = coeffs.s as i64 + 2;
    let (bx, by) = (px.floor() as i64, py.floor() as i64);
    let mut acc: Vec<((i64, i64), f64)> = Vec::new();
    for ax in bx - 1..=bx + 2 {
        for ay in by - 1..=by + 2 {
            let phi = eval_zp_box(px - ax as f64, py - ay as f64);
            if phi == 0.0 {
                continue;
            }
            for &((dx, dy), w) in &stencil {
                let key = (ax + dx, ay + dy);
                match acc.iter_mut().find(|e| e.0 == key) {
                    Some(e) => e.1 += phi * w,
                    None => acc.push((key, phi * w)),
                }
            }
        }
    }
    debug_assert!(acc.iter().all(|(k, _)| (k.0 - bx).abs() <= reach + 1));
    acc.iter().map(|e| e.1.abs()).sum()
}

/// Maximum of the Lebesgue function over a `grid × grid` sample of the
/// unit cell (the function is lattice-periodic).
pub fn four_direction_norm(coeffs: &NbBoxCoeffs, grid: usize) -> Result<f64> {
    if coeffs.mesh != super::BoxMesh::FourDirection {
        return Err(Error::InvalidParameter(
            "the ZP element lives on the four-direction mesh".into(),
        ));
    }
    if grid < 2 {
        return Err(Error::InvalidParameter("grid must be >= 2".into()));
    }
    let mut best = 0.0f64;
    for p in 0..=grid {
        for q in 0..=grid {
            let v = four_direction_lebesgue(coeffs, p as f64 / grid as f64, q as f64 / grid as f64);
            best = best.max(v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivariate::{nb_box_coeffs, BoxMesh};

    #[test]
    fn known_values() {
        assert!((eval_zp_box(0.0, 0.0) - 0.5).abs() < 1e-15);
        for (x, y) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            assert!((eval_zp_box(x, y) - 0.125).abs() < 1e-15);
        }
        for (x, y) in [(1.0, 1.0), (-1.0, 1.0), (1.5, 0.5), (2.0, 0.0), (0.0, 1.5)] {
            assert!(eval_zp_box(x, y).abs() < 1e-15);
        }
    }

    #[test]
    fn partition_of_unity_and_symmetry() {
        for k in 0..50 {
            let x = (k as f64 * 0.6180339887).fract() * 3.0 - 1.5;
            let y = (k as f64 * 0.7548776662).fract() * 3.0 - 1.5;
            let mut sum = 0.0;
            for a in -3..=3 {
                for b in -3..=3 {
                    sum += eval_zp_box(x - a as f64, y - b as f64);
                }
            }
            assert!((sum - 1.0).abs() < 1e-12);
            let v = eval_zp_box(x, y);
            for w in [eval_zp_box(-x, y), eval_zp_box(x, -y), eval_zp_box(y, x)] {
                assert!((v - w).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn lebesgue_of_identity_stencil_is_one() {
        let mut c = nb_box_coeffs(BoxMesh::FourDirection, 1).unwrap();
        c.center = 1.0;
        c.vertex = 0.0;
        assert!((four_direction_norm(&c, 20).unwrap() - 1.0).abs() < 1e-12);
    }
}
