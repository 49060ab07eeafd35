use thiserror::Error;

/// Errors raised while building or analysing quasi-interpolants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid knot sequence: {0}")]
    InvalidKnots(String),

    #[error("index {index} out of range (valid: {lo}..={hi})")]
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },

    #[error("point {x} outside domain [{a}, {b}]")]
    OutsideDomain { x: f64, a: f64, b: f64 },

    #[error("order r={r} exceeds degree m={m}")]
    OrderTooLarge { r: usize, m: usize },

    #[error("unsupported degree m={m}: {reason}")]
    UnsupportedDegree { m: usize, reason: &'static str },

    #[error("coincident nodes around index {0}")]
    CoincidentNodes(i64),

    #[error("partition violates the Q*(p,2) admissibility condition at index {index}")]
    Inadmissible { index: usize },

    #[error("exactness constraints are infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("singular local system at index {0}")]
    Singular(i64),

    #[error("claimed exactness on degree {degree} fails (residual {residual:e} at index {index})")]
    NotExact {
        degree: usize,
        residual: f64,
        index: i64,
    },

    #[error("operation requires point-evaluation functionals only")]
    NotDiscrete,

    #[error("quadrature did not meet tolerance {tolerance:e} (estimate spread {spread:e})")]
    Quadrature { tolerance: f64, spread: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short stable identifier, used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidKnots(_) => "invalid_knots",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::OutsideDomain { .. } => "outside_domain",
            Error::OrderTooLarge { .. } => "order_too_large",
            Error::UnsupportedDegree { .. } => "unsupported_degree",
            Error::CoincidentNodes(_) => "coincident_nodes",
            Error::Inadmissible { .. } => "inadmissible_partition",
            Error::Infeasible => "infeasible",
            Error::Unbounded => "unbounded",
            Error::Singular(_) => "singular",
            Error::NotExact { .. } => "not_exact",
            Error::NotDiscrete => "not_discrete",
            Error::Quadrature { .. } => "quadrature",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
