//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves `min c·x  s.t.  A x = b, x >= 0` for the small problems arising
//! from exactness constraints (tens of columns, a handful of rows).

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;
const MAX_ITERATIONS: usize = 50_000;
const UNBOUNDED_EPS: f64 = 1e-8;
/// Smallest admissible pivot relative to the largest entry of its column.
const PIVOT_REL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Equality-constraint multipliers `y` with `c - Aᵀy >= 0` at optimality.
    pub dual: Vec<f64>,
    /// Basic column of each row; indices `>= n` are leftover artificials
    /// of redundant rows.
    pub basis: Vec<usize>,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Reduced-cost tolerances are scaled by the column so that rounding
    /// noise in an ill-conditioned basis is not taken for an improving
    /// direction.
    fn column_scale(&self, j: usize) -> f64 {
        self.rows.iter().fold(1.0f64, |m, row| m.max(row[j].abs()))
    }

    /// Runs simplex iterations over columns `0..allowed`, stopping early
    /// once the objective reaches `floor`.
    fn optimize(&mut self, allowed: usize, floor: Option<f64>) -> Result<()> {
        let rhs = self.rhs();
        let mut blocked = vec![false; allowed];
        for _ in 0..MAX_ITERATIONS {
            if floor.is_some_and(|f| -self.cost[rhs] <= f) {
                return Ok(());
            }
            let Some(enter) =
                (0..allowed).find(|&j| !blocked[j] && self.cost[j] < -PIVOT_EPS * self.column_scale(j))
            else {
                return Ok(());
            };
            let pivot_tol = PIVOT_EPS.max(PIVOT_REL * self.column_scale(enter));
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[enter];
                if a > pivot_tol {
                    let ratio = row[rhs] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-15 * br.abs().max(1.0)
                                || (ratio <= br + 1e-15 * br.abs().max(1.0)
                                    && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((r, _)) => {
                    self.pivot(r, enter);
                    blocked.iter_mut().for_each(|b| *b = false);
                }
                // A marginally negative cost with no pivot row is noise.
                None if self.cost[enter] > -UNBOUNDED_EPS * self.column_scale(enter) => {
                    blocked[enter] = true;
                }
                None => return Err(Error::Unbounded),
            }
        }
        Err(Error::InvalidParameter(
            "simplex iteration limit reached".into(),
        ))
    }
}

/// Tableau over `[A | I | b]` with rows scaled to unit max-norm and a
/// nonnegative right-hand side; the identity columns are artificials.
fn setup(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<(Tableau, Vec<f64>)> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameter("LP dimension mismatch".into()));
    }
    let width = n + m + 1;
    let mut row_scale = vec![1.0; m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let norm = a[i].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let norm = if norm > 0.0 { norm } else { 1.0 };
        let s = if b[i] < 0.0 { -1.0 / norm } else { 1.0 / norm };
        row_scale[i] = s;
        let mut row = vec![0.0; width];
        for j in 0..n {
            row[j] = s * a[i][j];
        }
        row[n + i] = 1.0;
        row[width - 1] = s * b[i];
        rows.push(row);
    }
    let t = Tableau {
        rows,
        cost: vec![0.0; width],
        basis: (n..n + m).collect(),
        width,
    };
    Ok((t, row_scale))
}

fn rhs_scale(t: &Tableau) -> f64 {
    let rhs = t.rhs();
    t.rows.iter().fold(1.0f64, |acc, row| acc.max(row[rhs].abs()))
}

/// Minimizes `c·x` subject to `A x = b`, `x >= 0`.
pub fn minimize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let (mut t, row_scale) = setup(c, a, b)?;
    let n = c.len();
    let width = t.width;
    // Phase 1: minimize the sum of artificials.
    for row in &t.rows {
        for j in 0..n {
            t.cost[j] -= row[j];
        }
        t.cost[width - 1] -= row[width - 1];
    }
    let b_scale = rhs_scale(&t);
    t.optimize(n, Some(PIVOT_EPS * b_scale))?;
    if -t.cost[width - 1] > 1e-9 * b_scale {
        return Err(Error::Infeasible);
    }
    // Drive remaining artificials out where possible; rows that cannot be
    // pivoted are redundant and keep a zero artificial.
    for r in 0..t.rows.len() {
        if t.basis[r] >= n {
            let row_max = t.rows[r][..n].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if let Some(j) = (0..n).find(|&j| t.rows[r][j].abs() > 1e-9 * row_max.max(1.0)) {
                t.pivot(r, j);
            }
        }
    }
    phase_two(t, c, &row_scale)
}

/// Like [`minimize`], but starts phase 2 from the basis spanned by
/// `start` (one column per row) when that basis is primal feasible.
/// Falls back to the two-phase method otherwise.
pub fn minimize_from(c: &[f64], a: &[Vec<f64>], b: &[f64], start: &[usize]) -> Result<LpSolution> {
    let (mut t, row_scale) = setup(c, a, b)?;
    let n = c.len();
    let rhs = t.rhs();
    let mut ok = start.len() == t.rows.len() && start.iter().all(|&j| j < n);
    if ok {
        for &j in start {
            let best = (0..t.rows.len())
                .filter(|&r| t.basis[r] >= n)
                .max_by(|&r, &s| t.rows[r][j].abs().total_cmp(&t.rows[s][j].abs()));
            match best {
                Some(r) if t.rows[r][j].abs() > PIVOT_EPS * t.column_scale(j) => t.pivot(r, j),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
    }
    let b_scale = rhs_scale(&t);
    if ok && t.rows.iter().all(|row| row[rhs] >= -1e-12 * b_scale) {
        for row in &mut t.rows {
            row[rhs] = row[rhs].max(0.0);
        }
        return phase_two(t, c, &row_scale);
    }
    minimize(c, a, b)
}

fn phase_two(mut t: Tableau, c: &[f64], row_scale: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let width = t.width;
    let mut cost = vec![0.0; width];
    cost[..n].copy_from_slice(c);
    for (r, &bj) in t.basis.iter().enumerate() {
        let cb = if bj < n { c[bj] } else { 0.0 };
        if cb != 0.0 {
            for (v, tv) in cost.iter_mut().zip(&t.rows[r]) {
                *v -= cb * tv;
            }
        }
    }
    t.cost = cost;
    t.optimize(n, None)?;

    let mut x = vec![0.0; n];
    for (r, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            x[bj] = t.rows[r][width - 1].max(0.0);
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    let dual = (0..row_scale.len()).map(|i| -row_scale[i] * t.cost[n + i]).collect();
    Ok(LpSolution {
        x,
        objective,
        dual,
        basis: t.basis,
    })
}
