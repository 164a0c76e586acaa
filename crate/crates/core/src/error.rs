use thiserror::Error;

/// Errors raised across the library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid velocity {0}: must satisfy |v| < 1 (units of c)")]
    InvalidVelocity(f64),

    #[error("velocity addition is undefined for v = {v}, u = {u} (zero denominator)")]
    DegenerateVelocityAddition { v: f64, u: f64 },

    #[error("proper acceleration must be positive and finite, got {0}")]
    InvalidAcceleration(f64),

    #[error("event (t = {t}, x = {x}) lies outside the right Rindler wedge")]
    OutsideWedge { t: f64, x: f64 },

    #[error("noise symbol {symbol} does not belong to the {basis} basis")]
    WrongBasis { symbol: &'static str, basis: String },

    #[error("the gauge (counting) process has no analogue in a thermal basis")]
    GaugeInThermalBasis,

    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("scattering matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),

    #[error("Hamiltonian is not self-adjoint (defect {0:.3e})")]
    NotSelfAdjoint(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("expected a {expected} generator, got {found}")]
    WrongPicture {
        expected: &'static str,
        found: &'static str,
    },

    #[error("integration produced non-finite values at step {step}")]
    NonFinite { step: usize },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("extrapolation did not converge: residuals {residuals:?}")]
    NonConvergent { residuals: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative and finite",
        })
    }
}
