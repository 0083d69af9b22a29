use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("step size underflow at t = {t}: step {step:e} fell below {floor:e}")]
    StepSizeUnderflow { t: f64, step: f64, floor: f64 },

    #[error("tolerance not achievable: {0}")]
    ToleranceUnachievable(String),

    #[error("Volterra grid too coarse: step {step} exceeds stability bound {bound}")]
    GridTooCoarse { step: f64, bound: f64 },

    #[error("Volterra grid needs {points} points, over the budget of {budget}")]
    MemoryBudget { points: usize, budget: usize },

    #[error("time {t} outside trajectory range [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("Bessel order {0} unsupported (only 0..=3)")]
    UnsupportedBesselOrder(u32),

    #[error(
        "horizon {horizon} reached with |C_e| = {amplitude:.3e} still above {target:e}; \
         increase the horizon or force it"
    )]
    HorizonTooShort {
        horizon: f64,
        amplitude: f64,
        target: f64,
    },

    #[error("{what} not normalized: norm = {norm}")]
    Normalization { what: &'static str, norm: f64 },

    #[error("amplitude magnitude {0} exceeds 1")]
    AmplitudeTooLarge(f64),

    #[error("invalid two-qubit state: {0}")]
    InvalidState(String),

    #[error("empty series")]
    EmptySeries,

    #[error("config line {line}: {message}")]
    ConfigLine { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("unknown figure id `{id}`; valid ids: {valid}")]
    UnknownFigure { id: String, valid: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
