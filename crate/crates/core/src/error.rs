use thiserror::Error;

/// Errors shared by the sampling kernels, reference math, and harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument that must lie strictly inside (0, 1) does not.
    #[error("{name} = {value} must lie strictly inside (0, 1)")]
    OutsideOpenUnit { name: &'static str, value: f64 },

    /// Shape parameter outside the guarded open interval.
    #[error("shape a = {value} must satisfy {margin} <= a <= 1 - {margin}")]
    ShapeOutOfRange { value: f64, margin: f64 },

    #[error("shape margin = {value} must lie strictly inside (0, 1/2)")]
    InvalidMargin { value: f64 },

    #[error("gamma scale = {value} must be positive and finite")]
    ScaleOutOfRange { value: f64 },

    #[error("Beta({a}, {b}) is unsupported: parameters must be positive with min(a, b) < 1")]
    UnsupportedBetaPair { a: f64, b: f64 },

    #[error("Dirichlet concentration alpha[{index}] = {value} must lie strictly inside (0, 1)")]
    DirichletAlphaOutOfRange { index: usize, value: f64 },

    #[error("Dirichlet needs at least 2 components, got {d}")]
    DirichletTooShort { d: usize },

    #[error("uniform block holds {got} values but {expected} are required")]
    UniformBudget { expected: usize, got: usize },

    /// A draw rounded to the boundary of its support where the exact value
    /// is interior; the draw is rejected rather than silently corrupted.
    #[error("draw underflowed to the boundary of its support in {what}")]
    Underflow { what: &'static str },

    #[error("moment order k must be >= 1")]
    ZeroMomentOrder,

    #[error("variance estimate is not positive (constant sample?)")]
    DegenerateVariance,

    #[error("quadrature error bound {achieved:e} exceeds the requested {requested:e}")]
    QuadratureAccuracy { requested: f64, achieved: f64 },

    #[error("significance level = {level} must lie strictly inside (0, 1)")]
    BadLevel { level: f64 },

    #[error("sample set is empty or contains non-finite values")]
    BadSample,
}

pub type Result<T> = core::result::Result<T, Error>;
