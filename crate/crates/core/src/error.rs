use thiserror::Error;

/// Errors raised by the calculators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the formula is defined.
    #[error("{what} is out of range: {value}")]
    Domain { what: &'static str, value: f64 },

    /// The orbital angular rate does not exceed the body rotation rate, so a
    /// ground station never sees the satellite sweep past.
    #[error("super-synchronous orbit: orbital rate {orbital_rate:.6e} rad/s <= body rotation {rotation_rate:.6e} rad/s")]
    SuperSynchronous {
        orbital_rate: f64,
        rotation_rate: f64,
    },

    /// The requested physical target cannot be met with the given inputs.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Noise rate times detection window reached one.
    #[error("noise saturates the detection window (rate * window = {0})")]
    SaturatedNoise(f64),

    /// A correlation block contained no counts.
    #[error("correlation undefined for an empty block of counts")]
    UndefinedCorrelation,

    /// Purity requested with zero entangled coincidence rate.
    #[error("purity undefined for zero entangled rate")]
    UndefinedPurity,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}

pub(crate) fn non_negative(what: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}

pub(crate) fn unit_interval(what: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}
