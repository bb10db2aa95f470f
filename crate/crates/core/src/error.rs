use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown function form: {0}")]
    UnknownForm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dilation scale must be positive and finite, got {0}")]
    NonpositiveScale(f64),

    #[error("tensor product needs at least one component")]
    EmptyComponentList,

    #[error("quadrature did not reach tolerance (estimate {estimate:e}, error {error:e})")]
    NonConvergentQuadrature { estimate: f64, error: f64 },

    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadrature(String),

    #[error("no exact tail function for this form")]
    UnsupportedFormForExactTail,

    #[error("weight is not in class W: {0}")]
    InvalidWeight(String),

    #[error("exponent order violated: {0}")]
    ExponentOrder(String),

    #[error("exponent domain violated{}: {clause} ({detail})", axis.map(|a| format!(" on axis {a}")).unwrap_or_default())]
    ExponentDomain {
        axis: Option<usize>,
        clause: &'static str,
        detail: String,
    },

    #[error("function family is empty")]
    EmptyFamily,

    #[error("family norm is infinite at p = {0}")]
    InfiniteAtGridPoint(f64),

    #[error("norm is zero or infinite, ratio undefined")]
    ZeroNorm,

    #[error("kappa must be positive, got {0}")]
    NonpositiveKappa(f64),

    #[error("delta {delta} outside (0, {total_mass})")]
    DeltaOutOfRange { delta: f64, total_mass: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
