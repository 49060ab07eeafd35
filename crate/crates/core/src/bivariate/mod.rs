//! Bivariate coefficient functionals: criss-cross families on tensor meshes
//! and near-best stencils on the uniform three- and four-direction meshes.

mod zp;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::EXACTNESS_TOL;
use crate::splinecore::binomial;

pub use zp::{eval_zp_box, four_direction_lebesgue, four_direction_norm};

/// Rectangular partition `X × Y` carrying a criss-cross triangulation.
///
/// Cell `(i, j)` is `R_ij = [x_{i−1}, x_i] × [y_{j−1}, y_j]`, for
/// `1 <= i <= nx` and `1 <= j <= ny`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorMesh {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl TensorMesh {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        for (name, v) in [("X", &x), ("Y", &y)] {
            if v.len() < 2 {
                return Err(Error::InvalidKnots(format!("{name} needs at least two values")));
            }
            if v.iter().any(|t| !t.is_finite()) || v.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidKnots(format!("{name} must be strictly increasing")));
            }
        }
        Ok(Self { x, y })
    }

    pub fn uniform(nx: usize, ny: usize) -> Result<Self> {
        Self::new(
            (0..=nx).map(|k| k as f64).collect(),
            (0..=ny).map(|k| k as f64).collect(),
        )
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn nx(&self) -> usize {
        self.x.len() - 1
    }

    pub fn ny(&self) -> usize {
        self.y.len() - 1
    }

    /// `h_i = x_i − x_{i−1}`.
    pub fn h(&self, i: usize) -> f64 {
        self.x[i] - self.x[i - 1]
    }

    /// `k_j = y_j − y_{j−1}`.
    pub fn k(&self, j: usize) -> f64 {
        self.y[j] - self.y[j - 1]
    }

    pub fn s(&self, i: usize) -> f64 {
        0.5 * (self.x[i - 1] + self.x[i])
    }

    pub fn t(&self, j: usize) -> f64 {
        0.5 * (self.y[j - 1] + self.y[j])
    }

    /// Cell centre `ω_ij`.
    pub fn omega(&self, i: usize, j: usize) -> (f64, f64) {
        (self.s(i), self.t(j))
    }

    fn check_cell(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || i > self.nx() || j == 0 || j > self.ny() {
            return Err(Error::IndexOutOfRange {
                index: if i == 0 || i > self.nx() { i as i64 } else { j as i64 },
                lo: 1,
                hi: if i == 0 || i > self.nx() { self.nx() } else { self.ny() } as i64,
            });
        }
        Ok(())
    }
}

/// Measure defining a cell functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellMeasure {
    /// `f(ω_ij)`.
    Point,
    /// `⟨f, Π̃_ij⟩`, the unit-mass pyramid over `R_ij`.
    Pyramid,
    /// `μ_ij(f)`, the mean over `R_ij`.
    Average,
}

impl CellMeasure {
    /// `E[X^a Y^b]` for the measure centred at `ω_ij`, cell half-widths
    /// `alpha`, `beta`.
    pub fn central_moment(self, a: usize, b: usize, alpha: f64, beta: f64) -> f64 {
        if a % 2 == 1 || b % 2 == 1 {
            return 0.0;
        }
        let scale = alpha.powi(a as i32) * beta.powi(b as i32);
        match self {
            Self::Point => {
                if a == 0 && b == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Average => scale / ((a + 1) * (b + 1)) as f64,
            Self::Pyramid => {
                let (k, l) = (a as f64, b as f64);
                // ∫∫ x^k y^l (1 − max(|x|, |y|)) over [−1, 1]², over its k = l = 0 value 4/3
                let i_kl = 4.0 * (1.0 / (l + 1.0) + 1.0 / (k + 1.0)) / ((k + l + 2.0) * (k + l + 3.0));
                scale * i_kl * 0.75
            }
        }
    }
}

/// Criss-cross families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrissCross {
    S1,
    T1,
    G1,
    T2,
    G2,
}

impl CrissCross {
    pub fn measure(self) -> CellMeasure {
        match self {
            Self::S1 => CellMeasure::Point,
            Self::T1 | Self::T2 => CellMeasure::Pyramid,
            Self::G1 | Self::G2 => CellMeasure::Average,
        }
    }

    /// Total degree on which the family is exact.
    pub fn exactness_degree(self) -> usize {
        match self {
            Self::S1 | Self::T1 | Self::G1 => 1,
            Self::T2 | Self::G2 => 2,
        }
    }

    /// Whether the functional at `(i, j)` uses the four neighbouring cells.
    pub fn uses_neighbours(self) -> bool {
        matches!(self, Self::T2 | Self::G2)
    }
}

impl fmt::Display for CrissCross {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::S1 => "s1",
            Self::T1 => "t1",
            Self::G1 => "g1",
            Self::T2 => "t2",
            Self::G2 => "g2",
        };
        f.write_str(s)
    }
}

impl FromStr for CrissCross {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Self::S1),
            "t1" => Ok(Self::T1),
            "g1" => Ok(Self::G1),
            "t2" => Ok(Self::T2),
            "g2" => Ok(Self::G2),
            _ => Err(Error::Parse(format!("unknown criss-cross family '{s}'"))),
        }
    }
}

/// Weights of the five cells `(i∓1, j)`, `(i, j∓1)` and `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionalWeights {
    /// Cell `(i−1, j)`: `a_i` or `α_i`.
    pub west: f64,
    /// Cell `(i+1, j)`: `ā_i` or `ᾱ_i`.
    pub east: f64,
    /// Cell `(i, j−1)`: `c_j` or `γ_j`.
    pub south: f64,
    /// Cell `(i, j+1)`: `c̄_j` or `γ̄_j`.
    pub north: f64,
    /// Cell `(i, j)`: `b_ij` or `β_ij`.
    pub center: f64,
}

impl DirectionalWeights {
    pub const IDENTITY: Self = Self {
        west: 0.0,
        east: 0.0,
        south: 0.0,
        north: 0.0,
        center: 1.0,
    };

    /// `Σ |w|`.
    pub fn nu(&self) -> f64 {
        self.center.abs() + self.directional().iter().map(|w| w.abs()).sum::<f64>()
    }

    /// Largest directional magnitude.
    pub fn max_directional(&self) -> f64 {
        self.directional().iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    fn directional(&self) -> [f64; 4] {
        [self.west, self.east, self.south, self.north]
    }

    /// `(di, dj, weight)` of the nonzero-capable terms.
    pub fn terms(&self) -> [(i64, i64, f64); 5] {
        [
            (-1, 0, self.west),
            (1, 0, self.east),
            (0, -1, self.south),
            (0, 1, self.north),
            (0, 0, self.center),
        ]
    }
}

/// `(w, e)` for a three-span window `(h_prev, h, h_next)`.
fn t2_pair(hp: f64, h: f64, hn: f64) -> (f64, f64) {
    let d = 3.0 * hp + 4.0 * h + 3.0 * hn;
    (-3.0 * h * h / ((hp + h) * d), -3.0 * h * h / (d * (h + hn)))
}

fn g2_pair(hp: f64, h: f64, hn: f64) -> (f64, f64) {
    let d = hp + h + hn;
    (-h * h / ((hp + h) * d), -h * h / (d * (h + hn)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellWeights {
    pub i: usize,
    pub j: usize,
    pub weights: DirectionalWeights,
}

/// One criss-cross family on a mesh. Families using neighbour cells are
/// defined on interior cells only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BivariateFunctionalFamily {
    pub family: CrissCross,
    pub mesh: TensorMesh,
    pub cells: Vec<CellWeights>,
}

impl BivariateFunctionalFamily {
    pub fn new(family: CrissCross, mesh: TensorMesh) -> Result<Self> {
        let (nx, ny) = (mesh.nx(), mesh.ny());
        let mut cells = Vec::new();
        if family.uses_neighbours() {
            if nx < 3 || ny < 3 {
                return Err(Error::InvalidKnots(
                    "T2/G2 need at least one interior cell (3 x 3 cells)".into(),
                ));
            }
            let pair = if family == CrissCross::T2 { t2_pair } else { g2_pair };
            for i in 2..nx {
                let (west, east) = pair(mesh.h(i - 1), mesh.h(i), mesh.h(i + 1));
                for j in 2..ny {
                    let (south, north) = pair(mesh.k(j - 1), mesh.k(j), mesh.k(j + 1));
                    let center = 1.0 - (west + east + south + north);
                    cells.push(CellWeights {
                        i,
                        j,
                        weights: DirectionalWeights {
                            west,
                            east,
                            south,
                            north,
                            center,
                        },
                    });
                }
            }
        } else {
            for i in 1..=nx {
                for j in 1..=ny {
                    cells.push(CellWeights {
                        i,
                        j,
                        weights: DirectionalWeights::IDENTITY,
                    });
                }
            }
        }
        Ok(Self { family, mesh, cells })
    }

    pub fn cell(&self, i: usize, j: usize) -> Option<&CellWeights> {
        self.cells.iter().find(|c| c.i == i && c.j == j)
    }

    /// `max Σ|w|` over cells.
    pub fn nu_bound(&self) -> f64 {
        self.cells.iter().map(|c| c.weights.nu()).fold(0.0, f64::max)
    }

    pub fn max_directional(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.weights.max_directional())
            .fold(0.0, f64::max)
    }

    /// `Λ_ij(e_rs)` with coordinates measured from `origin`.
    pub fn apply_monomial(&self, cell: &CellWeights, r: usize, s: usize, origin: (f64, f64)) -> f64 {
        let m = self.family.measure();
        cell.weights
            .terms()
            .iter()
            .filter(|t| t.2 != 0.0)
            .map(|&(di, dj, w)| {
                let ii = (cell.i as i64 + di) as usize;
                let jj = (cell.j as i64 + dj) as usize;
                w * cell_moment(&self.mesh, m, ii, jj, r, s, origin)
            })
            .sum()
    }

    /// Largest `|Λ_ij(e_rs) − target|` over `r + s <= q` and all cells, in
    /// coordinates centred at `ω_ij` and scaled by the stencil extent.
    pub fn exactness_residual(&self, q: usize) -> f64 {
        let mut worst = 0.0f64;
        for cell in &self.cells {
            let (i, j) = (cell.i, cell.j);
            let hx = span_extent(self.mesh.x(), i);
            let hy = span_extent(self.mesh.y(), j);
            let local = TensorMesh {
                x: self.mesh.x.iter().map(|v| (v - self.mesh.s(i)) / hx).collect(),
                y: self.mesh.y.iter().map(|v| (v - self.mesh.t(j)) / hy).collect(),
            };
            let fam = Self {
                family: self.family,
                mesh: local,
                cells: Vec::new(),
            };
            for r in 0..=q {
                for s in 0..=q - r {
                    let got = fam.apply_monomial(cell, r, s, (0.0, 0.0));
                    let want = bcoef_target(&fam.mesh, i, j, r, s, (0.0, 0.0));
                    worst = worst.max((got - want).abs());
                }
            }
        }
        worst
    }

    pub fn is_exact_on(&self, q: usize) -> bool {
        self.exactness_residual(q) <= EXACTNESS_TOL
    }

    /// Per cell `(Λ(e_20) − b_20, Λ(e_02) − b_02)` with coordinates centred
    /// at each `ω_ij`; `b_rs` is the B-coefficient of `e_rs`.
    pub fn monomial_residuals(&self) -> Vec<(usize, usize, f64, f64)> {
        self.cells
            .iter()
            .map(|c| {
                let o = self.mesh.omega(c.i, c.j);
                let r20 = self.apply_monomial(c, 2, 0, o) - bcoef_target(&self.mesh, c.i, c.j, 2, 0, o);
                let r02 = self.apply_monomial(c, 0, 2, o) - bcoef_target(&self.mesh, c.i, c.j, 0, 2, o);
                (c.i, c.j, r20, r02)
            })
            .collect()
    }
}

fn span_extent(v: &[f64], i: usize) -> f64 {
    let lo = v[i.saturating_sub(2)];
    let hi = v[(i + 1).min(v.len() - 1)];
    0.5 * (hi - lo)
}

/// `∫ (x − ox)^r (y − oy)^s dμ_ij`.
pub fn cell_moment(
    mesh: &TensorMesh,
    measure: CellMeasure,
    i: usize,
    j: usize,
    r: usize,
    s: usize,
    origin: (f64, f64),
) -> f64 {
    let cx = mesh.s(i) - origin.0;
    let cy = mesh.t(j) - origin.1;
    let (alpha, beta) = (0.5 * mesh.h(i), 0.5 * mesh.k(j));
    let mut total = 0.0;
    for a in (0..=r).step_by(2) {
        for b in (0..=s).step_by(2) {
            total += binomial(r, a)
                * binomial(s, b)
                * cx.powi((r - a) as i32)
                * cy.powi((s - b) as i32)
                * measure.central_moment(a, b, alpha, beta);
        }
    }
    total
}

/// B-coefficient at `(i, j)` of `(x − ox)^r (y − oy)^s`, `r + s <= 2`:
/// `p(ω) − (h²/8) p_xx − (k²/8) p_yy`.
pub fn bcoef_target(mesh: &TensorMesh, i: usize, j: usize, r: usize, s: usize, origin: (f64, f64)) -> f64 {
    assert!(r + s <= 2, "criss-cross targets are defined on quadratics");
    let x = mesh.s(i) - origin.0;
    let y = mesh.t(j) - origin.1;
    let p = x.powi(r as i32) * y.powi(s as i32);
    match (r, s) {
        (2, 0) => p - 0.25 * mesh.h(i).powi(2),
        (0, 2) => p - 0.25 * mesh.k(j).powi(2),
        _ => p,
    }
}

/// Convenience wrapper with index checks.
pub fn crisscross(family: CrissCross, mesh: &TensorMesh) -> Result<BivariateFunctionalFamily> {
    BivariateFunctionalFamily::new(family, mesh.clone())
}

pub fn crisscross_t2(mesh: &TensorMesh) -> Result<BivariateFunctionalFamily> {
    crisscross(CrissCross::T2, mesh)
}

pub fn crisscross_g2(mesh: &TensorMesh) -> Result<BivariateFunctionalFamily> {
    crisscross(CrissCross::G2, mesh)
}

/// `Λ_ij(f)` for a family applied to a point-evaluable `f`: point values
/// directly, cell measures with a tensor Gauss rule.
pub fn apply_functional<F: Fn(f64, f64) -> f64>(
    fam: &BivariateFunctionalFamily,
    i: usize,
    j: usize,
    f: F,
) -> Result<f64> {
    fam.mesh.check_cell(i, j)?;
    let cell = fam.cell(i, j).ok_or(Error::IndexOutOfRange {
        index: i as i64,
        lo: 2,
        hi: fam.mesh.nx() as i64 - 1,
    })?;
    let m = fam.family.measure();
    let rule = crate::splinecore::gauss::rule(8);
    let mut total = 0.0;
    for (di, dj, w) in cell.weights.terms() {
        if w == 0.0 {
            continue;
        }
        let ii = (i as i64 + di) as usize;
        let jj = (j as i64 + dj) as usize;
        let (cx, cy) = fam.mesh.omega(ii, jj);
        let (ax, by) = (0.5 * fam.mesh.h(ii), 0.5 * fam.mesh.k(jj));
        let v = match m {
            CellMeasure::Point => f(cx, cy),
            _ => {
                // quadrants split along their diagonal; each triangle is mapped
                // from the unit square by (u, v) -> (u, uv) with Jacobian u
                let mut acc = 0.0;
                for (qx, qy) in [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)] {
                    for swap in [false, true] {
                        for (u, wu) in rule.nodes.iter().zip(&rule.weights) {
                            for (v, wv) in rule.nodes.iter().zip(&rule.weights) {
                                let (a, b) = (0.5 * (u + 1.0), 0.5 * (v + 1.0));
                                let (lx, ly) = if swap { (a * b, a) } else { (a, a * b) };
                                let dens = match m {
                                    CellMeasure::Average => 0.25,
                                    _ => 0.75 * (1.0 - a),
                                };
                                acc += 0.25 * wu * wv * a * dens * f(cx + qx * ax * lx, cy + qy * by * ly);
                            }
                        }
                    }
                }
                acc
            }
        };
        total += w * v;
    }
    Ok(total)
}

/// Uniform-mesh near-best stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxMesh {
    ThreeDirection,
    FourDirection,
}

impl FromStr for BoxMesh {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "three" | "three-direction" | "3" => Ok(Self::ThreeDirection),
            "four" | "four-direction" | "4" => Ok(Self::FourDirection),
            _ => Err(Error::Parse(format!("unknown mesh type '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NbBoxCoeffs {
    pub mesh: BoxMesh,
    pub s: usize,
    pub center: f64,
    pub vertex: f64,
    /// Lattice offsets carrying the vertex weight.
    pub vertices: Vec<(i64, i64)>,
    pub nu: f64,
}

impl NbBoxCoeffs {
    /// `(offset, weight)` including the centre.
    pub fn stencil(&self) -> Vec<((i64, i64), f64)> {
        let mut out = vec![((0, 0), self.center)];
        out.extend(self.vertices.iter().map(|&v| (v, self.vertex)));
        out
    }
}

/// Near-best dQI weights on the hexagon (three directions) or lozenge
/// (four directions) of scale `s`.
pub fn nb_box_coeffs(mesh: BoxMesh, s: usize) -> Result<NbBoxCoeffs> {
    if s < 1 {
        return Err(Error::InvalidParameter("scale s must be >= 1".into()));
    }
    let si = s as i64;
    let ss = (s * s) as f64;
    let center = 1.0 + 1.0 / (2.0 * ss);
    let (vertex, vertices) = match mesh {
        BoxMesh::ThreeDirection => (
            -1.0 / (12.0 * ss),
            vec![(si, 0), (-si, 0), (0, si), (0, -si), (si, si), (-si, -si)],
        ),
        BoxMesh::FourDirection => (-1.0 / (8.0 * ss), vec![(si, 0), (-si, 0), (0, si), (0, -si)]),
    };
    let nu = center.abs() + vertex.abs() * vertices.len() as f64;
    Ok(NbBoxCoeffs {
        mesh,
        s,
        center,
        vertex,
        vertices,
        nu,
    })
}
