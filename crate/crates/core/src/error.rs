use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid orbital elements: {0}")]
    InvalidElements(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Kepler's equation did not converge for M = {mean_anomaly}, e = {eccentricity}")]
    KeplerNonConvergence {
        mean_anomaly: f64,
        eccentricity: f64,
    },

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("state outside the spherical coordinate domain: {0}")]
    Domain(String),

    #[error("integrator step size underflow at {at} (h = {step})")]
    StepSizeUnderflow { at: f64, step: f64 },

    #[error("integrator exceeded its step limit at {at} after {steps} steps")]
    StepLimit { at: f64, steps: usize },

    #[error("integrator produced a non-finite derivative at {at}")]
    NonFiniteDerivative { at: f64 },

    #[error("model {model} failed at t = {time} s: {source}")]
    Model {
        model: String,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("record list is empty")]
    EmptyRecords,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by user input files rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
