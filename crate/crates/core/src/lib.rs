//! Near-best spline quasi-interpolants.
//!
//! Discrete and integral quasi-interpolants `Qf = sum_j Λ_j(f) B_j` on
//! uniform and non-uniform knots, l1-optimal ("near-best") coefficient
//! functionals obtained from a small dense linear program, bivariate
//! criss-cross and box-spline coefficient families, norm estimation and
//! quadrature rules derived from the operators.

// `!(x > 0.0)` rejects NaN on purpose; dense kernels index by row and column.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bivariate;
pub mod cli;
pub mod error;
pub mod functionals;
pub mod io;
pub mod nearbest;
pub mod normest;
pub mod partition;
pub mod quadrature;
pub mod quasiinterp;
pub mod splinecore;

pub use error::{Error, Result};
pub use functionals::{CoefficientFunctional, ExactnessReport, Family, FunctionalKind, Node, QuasiInterpolant};
pub use splinecore::{KnotLayout, KnotSequence, NormalizedBSpline};
