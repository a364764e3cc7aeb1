use thiserror::Error;

use crate::vec2::Vec2;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the admissible set of an operation.
    #[error("{what} = {value} is outside the admissible range {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("point ({}, {}) lies outside the field domain", .0.x, .0.y)]
    OutsideDomain(Vec2),

    /// Query within the tolerance band of a jump curve: the field value is two-valued there.
    #[error("point ({}, {}) lies on jump curve `{curve}`", point.x, point.y)]
    OnJumpCurve { curve: String, point: Vec2 },

    #[error("point ({}, {}) is a singular point of the field", .0.x, .0.y)]
    SingularPoint(Vec2),

    #[error("integrand is not finite at x = {at}")]
    NonFinite { at: f64, value: f64 },

    #[error("quadrature did not reach tolerance {tol:e}: best estimate {best}, error estimate {error_estimate:e}")]
    Accuracy {
        best: f64,
        error_estimate: f64,
        tol: f64,
    },

    #[error("no sign change of the energy gap on the scanned mesh ({} angles from {:e} to {:e})", .mesh.len(), .mesh.last().copied().unwrap_or(f64::NAN), .mesh.first().copied().unwrap_or(f64::NAN))]
    NoSignChange { mesh: Vec<f64> },

    #[error("rectangle edge runs along jump curve `{curve}`; reposition the rectangle")]
    EdgeOnCurve { curve: String },

    #[error("indeterminate energy difference (infinite energies on both sides)")]
    Indeterminate,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
