use serde::{Deserialize, Serialize};

use super::density::NormalizedBSpline;
use super::gauss;
use crate::error::{Error, Result};

/// How the ends of a knot sequence are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnotLayout {
    /// End knots repeated `m + 1` times; the basis lives on `[a, b]`.
    Clamped,
    /// No end multiplicities. Only the central part of the domain is free of
    /// boundary effects; used to emulate bi-infinite uniform knots.
    Open,
}

/// Non-decreasing knots `u_0 <= u_1 <= ...` for splines of degree `m`.
///
/// Basis function `B_j` has support `[u_j, u_{j+m+1}]`, and its Greville
/// window is `u_{j+1}, ..., u_{j+m}`. For a clamped sequence on the
/// breakpoints `a = x_0 < ... < x_n = b` there are `n + m` basis functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotSequence {
    degree: usize,
    knots: Vec<f64>,
    layout: KnotLayout,
    uniform_step: Option<f64>,
}

/// Greville-type data attached to one basis index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrevilleData {
    pub theta: f64,
    pub theta2: f64,
    pub lambda: f64,
    /// `theta_{j+1} - theta_j`, absent for the last index.
    pub delta_theta: Option<f64>,
}

pub(crate) fn elementary_symmetric(values: impl Iterator<Item = f64>, r: usize) -> f64 {
    let mut e = vec![0.0; r + 1];
    e[0] = 1.0;
    for v in values {
        for k in (1..=r).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e[r]
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl KnotSequence {
    /// Clamped sequence of degree `degree` on strictly increasing breakpoints.
    pub fn clamped(degree: usize, breakpoints: &[f64]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidKnots("degree must be at least 1".into()));
        }
        if breakpoints.len() < 2 {
            return Err(Error::InvalidKnots("need at least two breakpoints".into()));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidKnots("non-finite breakpoint".into()));
        }
        if let Some(k) = breakpoints.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidKnots(format!(
                "breakpoints must be strictly increasing (violated at {})",
                k + 1
            )));
        }
        let a = breakpoints[0];
        let b = breakpoints[breakpoints.len() - 1];
        let mut knots = Vec::with_capacity(breakpoints.len() + 2 * degree);
        knots.extend(std::iter::repeat_n(a, degree));
        knots.extend_from_slice(breakpoints);
        knots.extend(std::iter::repeat_n(b, degree));
        Ok(Self {
            degree,
            knots,
            layout: KnotLayout::Clamped,
            uniform_step: None,
        })
    }

    /// Open uniform knots with `spans` intervals of width `step` covering
    /// `[-spans*step/2, spans*step/2]`, extended by `degree` knots each side.
    ///
    /// For odd degree and even `spans` with `step = 1` the Greville points
    /// are the integers, matching the centered cardinal setting.
    pub fn uniform_emulation(degree: usize, spans: usize, step: f64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidKnots("degree must be at least 1".into()));
        }
        if spans == 0 || !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidKnots(
                "uniform emulation needs spans >= 1 and a positive step".into(),
            ));
        }
        let half = spans as f64 / 2.0;
        let knots = (0..=(spans + 2 * degree))
            .map(|k| (k as f64 - degree as f64 - half) * step)
            .collect();
        Ok(Self {
            degree,
            knots,
            layout: KnotLayout::Open,
            uniform_step: Some(step),
        })
    }

    /// General sequence from an explicit knot vector.
    pub fn from_knots(degree: usize, knots: Vec<f64>, layout: KnotLayout) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidKnots("degree must be at least 1".into()));
        }
        if knots.len() < 2 * degree + 2 {
            return Err(Error::InvalidKnots(format!(
                "need at least {} knots for degree {degree}",
                2 * degree + 2
            )));
        }
        if knots.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidKnots("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidKnots("knots must be non-decreasing".into()));
        }
        let mut run = 1;
        for w in knots.windows(2) {
            run = if w[1] == w[0] { run + 1 } else { 1 };
            if run > degree + 1 {
                return Err(Error::InvalidKnots(format!(
                    "knot {} has multiplicity above {}",
                    w[0],
                    degree + 1
                )));
            }
        }
        let ks = Self {
            degree,
            knots,
            layout,
            uniform_step: None,
        };
        let (a, b) = ks.domain();
        if !(b > a) {
            return Err(Error::InvalidKnots("empty domain".into()));
        }
        Ok(ks)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn layout(&self) -> KnotLayout {
        self.layout
    }

    pub fn uniform_step(&self) -> Option<f64> {
        self.uniform_step
    }

    /// Number of basis functions.
    pub fn len(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `[u_m, u_len]`, where the basis sums to one.
    pub fn domain(&self) -> (f64, f64) {
        (self.knots[self.degree], self.knots[self.len()])
    }

    /// Region free of end effects: the whole domain when clamped, the
    /// central half otherwise.
    pub fn evaluation_window(&self) -> (f64, f64) {
        let (a, b) = self.domain();
        match self.layout {
            KnotLayout::Clamped => (a, b),
            KnotLayout::Open => {
                let mid = 0.5 * (a + b);
                let quarter = 0.25 * (b - a);
                (mid - quarter, mid + quarter)
            }
        }
    }

    /// Distinct knot values inside the domain, including both ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.domain();
        let mut out: Vec<f64> = self
            .knots
            .iter()
            .copied()
            .filter(|&x| x >= a && x <= b)
            .collect();
        out.dedup();
        out
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: j as i64,
                lo: 0,
                hi: self.len() as i64 - 1,
            });
        }
        Ok(())
    }

    /// Knot `u_k` for any integer `k`; indices beyond the stored vector are
    /// extrapolated for uniform emulations and `None` otherwise.
    pub fn extended_knot(&self, k: i64) -> Option<f64> {
        if k >= 0 && (k as usize) < self.knots.len() {
            return Some(self.knots[k as usize]);
        }
        let h = self.uniform_step?;
        Some(self.knots[0] + k as f64 * h)
    }

    /// The `m` knots `u_{j+1}, ..., u_{j+m}` determining the Greville data of `B_j`.
    pub fn window(&self, j: usize) -> Result<&[f64]> {
        self.check_index(j)?;
        Ok(&self.knots[j + 1..=j + self.degree])
    }

    /// Greville window for a possibly virtual index of a uniform emulation.
    pub fn extended_window(&self, j: i64) -> Option<Vec<f64>> {
        (1..=self.degree as i64)
            .map(|s| self.extended_knot(j + s))
            .collect()
    }

    /// `theta_j`, the mean of the `m` window knots.
    pub fn greville(&self, j: usize) -> Result<f64> {
        let w = self.window(j)?;
        Ok(w.iter().sum::<f64>() / self.degree as f64)
    }

    /// Greville point of a possibly virtual index (uniform emulation only
    /// outside the stored range).
    pub fn extended_greville(&self, j: i64) -> Option<f64> {
        let w = self.extended_window(j)?;
        Some(w.iter().sum::<f64>() / self.degree as f64)
    }

    /// `theta_j^{(r)} = sigma_r(window) / C(m, r)`: the B-coefficient of `x^r`.
    pub fn symmetric_coeff(&self, j: usize, r: usize) -> Result<f64> {
        self.symmetric_coeff_shifted(j, r, 0.0, 1.0)
    }

    /// B-coefficient of `((x - center) / scale)^r`, i.e. the symmetric
    /// coefficient computed on the shifted, scaled window.
    pub fn symmetric_coeff_shifted(&self, j: usize, r: usize, center: f64, scale: f64) -> Result<f64> {
        if r > self.degree {
            return Err(Error::OrderTooLarge { r, m: self.degree });
        }
        let w = self.window(j)?;
        Ok(symmetric_of_window(w, r, center, scale))
    }

    /// `lambda_j = theta_j^2 - theta_j^{(2)}`, evaluated about `theta_j`.
    pub fn lambda(&self, j: usize) -> Result<f64> {
        if self.degree < 2 {
            return Err(Error::UnsupportedDegree {
                m: self.degree,
                reason: "lambda needs at least two window knots",
            });
        }
        let theta = self.greville(j)?;
        Ok(-self.symmetric_coeff_shifted(j, 2, theta, 1.0)?)
    }

    /// `lambda_j` from the pairwise squared-difference sum.
    pub fn lambda_pairwise(&self, j: usize) -> Result<f64> {
        let m = self.degree;
        if m < 2 {
            return Err(Error::UnsupportedDegree {
                m,
                reason: "lambda needs at least two window knots",
            });
        }
        let w = self.window(j)?;
        let mut sum = 0.0;
        for r in 0..m {
            for s in r + 1..m {
                sum += (w[r] - w[s]).powi(2);
            }
        }
        Ok(sum / ((m * m * (m - 1)) as f64))
    }

    pub fn greville_data(&self, j: usize) -> Result<GrevilleData> {
        let theta = self.greville(j)?;
        let theta2 = if self.degree >= 2 {
            self.symmetric_coeff(j, 2)?
        } else {
            theta * theta
        };
        let lambda = if self.degree >= 2 { self.lambda(j)? } else { 0.0 };
        let delta_theta = if j + 1 < self.len() {
            Some(self.greville(j + 1)? - theta)
        } else {
            None
        };
        Ok(GrevilleData {
            theta,
            theta2,
            lambda,
            delta_theta,
        })
    }

    /// All Greville points, in index order.
    pub fn greville_points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|j| self.greville(j).expect("index in range"))
            .collect()
    }

    /// Span index `k` with `u_k <= x < u_{k+1}`, `m <= k < len`.
    pub fn find_span(&self, x: f64) -> Result<usize> {
        let (a, b) = self.domain();
        let tol = 1e-13 * (b - a).abs().max(1.0);
        if !(x >= a - tol && x <= b + tol) {
            return Err(Error::OutsideDomain { x, a, b });
        }
        let m = self.degree;
        let n = self.len();
        if x >= b {
            let mut k = n - 1;
            while k > m && self.knots[k] >= self.knots[k + 1] {
                k -= 1;
            }
            return Ok(k);
        }
        if x <= a {
            let mut k = m;
            while k + 1 < n && self.knots[k + 1] <= self.knots[k] {
                k += 1;
            }
            return Ok(k);
        }
        let (mut lo, mut hi) = (m, n);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if x < self.knots[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(lo)
    }

    fn raw_basis(&self, span: usize, x: f64, degree: usize) -> Vec<f64> {
        let u = &self.knots;
        let mut n = vec![0.0; degree + 1];
        let mut left = vec![0.0; degree + 1];
        let mut right = vec![0.0; degree + 1];
        n[0] = 1.0;
        for j in 1..=degree {
            left[j] = x - u[span + 1 - j];
            right[j] = u[span + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                let temp = n[r] / (right[r + 1] + left[j - r]);
                n[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            n[j] = saved;
        }
        n
    }

    /// Non-zero basis values at `x`: `(first, values)` with `values[k] = B_{first+k}(x)`.
    pub fn basis_functions(&self, x: f64) -> Result<(usize, Vec<f64>)> {
        let span = self.find_span(x)?;
        let x = x.clamp(self.domain().0, self.domain().1);
        Ok((span - self.degree, self.raw_basis(span, x, self.degree)))
    }

    /// First derivatives of the non-zero basis functions at `x`.
    pub fn basis_derivatives(&self, x: f64) -> Result<(usize, Vec<f64>)> {
        let span = self.find_span(x)?;
        let x = x.clamp(self.domain().0, self.domain().1);
        let m = self.degree;
        let lower = self.raw_basis(span, x, m - 1);
        let u = &self.knots;
        let first = span - m;
        let mf = m as f64;
        let mut out = vec![0.0; m + 1];
        for (k, slot) in out.iter_mut().enumerate() {
            let i = first + k;
            // B_{i,m-1} is lower[k-1] (zero for k = 0), B_{i+1,m-1} is lower[k].
            let left = if k > 0 { lower[k - 1] } else { 0.0 };
            let right = if k < m { lower[k] } else { 0.0 };
            let dl = u[i + m] - u[i];
            let dr = u[i + m + 1] - u[i + 1];
            let mut v = 0.0;
            if dl > 0.0 {
                v += mf * left / dl;
            }
            if dr > 0.0 {
                v -= mf * right / dr;
            }
            *slot = v;
        }
        Ok((first, out))
    }

    pub fn eval_bspline(&self, i: usize, x: f64) -> Result<f64> {
        self.check_index(i)?;
        let (first, vals) = self.basis_functions(x)?;
        Ok(if i >= first && i <= first + self.degree {
            vals[i - first]
        } else {
            0.0
        })
    }

    pub fn eval_bspline_deriv(&self, i: usize, x: f64) -> Result<f64> {
        self.check_index(i)?;
        let (first, vals) = self.basis_derivatives(x)?;
        Ok(if i >= first && i <= first + self.degree {
            vals[i - first]
        } else {
            0.0
        })
    }

    fn check_coeffs(&self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                self.len(),
                coeffs.len()
            )));
        }
        Ok(())
    }

    /// `sum_i c_i B_i(x)`.
    pub fn eval_spline(&self, coeffs: &[f64], x: f64) -> Result<f64> {
        self.check_coeffs(coeffs)?;
        let (first, vals) = self.basis_functions(x)?;
        Ok(vals.iter().enumerate().map(|(k, v)| v * coeffs[first + k]).sum())
    }

    /// `d/dx sum_i c_i B_i(x)`.
    pub fn eval_spline_deriv(&self, coeffs: &[f64], x: f64) -> Result<f64> {
        self.check_coeffs(coeffs)?;
        let (first, vals) = self.basis_derivatives(x)?;
        Ok(vals.iter().enumerate().map(|(k, v)| v * coeffs[first + k]).sum())
    }

    /// Goodman–Sharma dual density of index `i`: the degree `m-2` B-spline on
    /// `u_{i+1}, ..., u_{i+m}` normalized to unit integral.
    pub fn dual_density(&self, i: usize) -> Result<NormalizedBSpline> {
        if self.degree < 2 {
            return Err(Error::UnsupportedDegree {
                m: self.degree,
                reason: "dual densities have degree m-2",
            });
        }
        if i == 0 || i + 1 >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i as i64,
                lo: 1,
                hi: self.len() as i64 - 2,
            });
        }
        NormalizedBSpline::new(self.knots[i + 1..=i + self.degree].to_vec())
            .map_err(|_| Error::CoincidentNodes(i as i64))
    }

    /// `∫ t^r M̃_{i-1}(t) dt` for the Goodman–Sharma dual density.
    pub fn dual_moment(&self, i: usize, r: usize) -> Result<f64> {
        Ok(self.dual_density(i)?.moment(r))
    }

    /// `∫_a^b B_i`.
    pub fn bspline_integral(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        let m = self.degree;
        let (lo, hi) = (self.knots[i], self.knots[i + m + 1]);
        let (a, b) = self.domain();
        if lo >= a && hi <= b {
            return Ok((hi - lo) / (m as f64 + 1.0));
        }
        let n = gauss::points_for_degree(m);
        let mut total = 0.0;
        for k in i..=i + m {
            let (p, q) = (self.knots[k].max(a), self.knots[k + 1].min(b));
            if q > p {
                total += gauss::integrate(
                    |x| {
                        // Evaluate on span k directly to avoid knot ambiguity.
                        let vals = self.raw_basis(k, x, m);
                        vals[i + m - k]
                    },
                    p,
                    q,
                    n,
                );
            }
        }
        Ok(total)
    }
}

pub(crate) fn symmetric_of_window(w: &[f64], r: usize, center: f64, scale: f64) -> f64 {
    elementary_symmetric(w.iter().map(|t| (t - center) / scale), r) / binomial(w.len(), r)
}
