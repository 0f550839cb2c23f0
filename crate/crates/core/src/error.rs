use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series did not converge within {terms} terms (last term norm {last_term:e})")]
    Truncation { terms: usize, last_term: f64 },

    #[error("left factor of a Cauchy product must have real coefficients; coefficient {index} is not real")]
    NonIntrinsicFactor { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("quadrature would need {nodes} nodes, above the cap of {cap}; lower the order or the dimension")]
    NodeBudget { nodes: u128, cap: u128 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("not an imaginary unit: real part {real}, modulus {modulus}")]
    InvalidImaginaryUnit { real: f64, modulus: f64 },

    #[error("integrand not compatible with the Gaussian quadrature weight: {0}")]
    WeightIncompatible(String),

    #[error("matrix is not Hermitian (defect {defect:e} above tolerance {tol:e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("tridiagonal eigensolver did not converge for order {order}")]
    EigenSolver { order: usize },

    #[error("series degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("kernel `{kernel}` cannot be evaluated on {points} points")]
    PointType { kernel: String, points: &'static str },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn require_positive<T: crate::Real>(name: &'static str, value: T) -> Result<()> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {value}")))
    }
}
