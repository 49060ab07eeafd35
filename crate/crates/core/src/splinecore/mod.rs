//! Univariate B-spline infrastructure: knot sequences, Greville-type
//! symmetric functions, evaluation, derivatives, dual moments and integrals.

mod density;
pub mod gauss;
mod knots;

pub use density::NormalizedBSpline;
pub use knots::{GrevilleData, KnotLayout, KnotSequence};

pub(crate) use knots::{binomial, symmetric_of_window};
