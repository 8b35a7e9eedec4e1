use thiserror::Error;

use crate::quadrature::QuadratureError;

/// Failures raised by the physics layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("characteristic roots are degenerate (|z1 - z2| = {separation:e})")]
    DegenerateRoots { separation: f64 },

    #[error("bath response has a pole on the integration path at w = {w}")]
    ResonancePole { w: f64 },

    #[error("vanishing denominator in {what} at w = {w}")]
    VanishingDenominator { what: &'static str, w: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("no eligible bath modes for {0}")]
    EmptyModeSet(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
