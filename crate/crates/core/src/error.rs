use thiserror::Error;

use crate::quadrature::QuadError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the function being evaluated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bath or oscillator parameter is not physically admissible.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Evaluation too close to the real pole of a dissipationless response.
    #[error("omega = {omega} lies within {window:e} of the pole at {pole}")]
    PoleProximity { omega: f64, pole: f64, window: f64 },

    /// The requested evaluation path does not exist for this bath.
    #[error("{what} is not available for the {bath} bath")]
    NotApplicable { what: &'static str, bath: &'static str },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

pub type Result<T> = std::result::Result<T, Error>;
