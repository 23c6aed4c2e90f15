//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// One or more bound invariants are violated; messages come from
    /// [`crate::model::validate_bounds`]-style checks.
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    /// A norm or parameter field required by the selected test is absent.
    #[error("missing field `{0}`")]
    MissingField(&'static str),

    /// An operation precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Matrix construction or dimension failure.
    #[error("matrix error: {0}")]
    Matrix(String),

    /// A delay function produced an argument ahead of current time.
    #[error("delay function evaluates ahead of time at t = {t}: h(t) = {h}")]
    DelayViolation { t: f64, h: f64 },

    /// History function cannot be evaluated as requested.
    #[error("history error: {0}")]
    History(String),

    /// Simulation setup or runtime failure.
    #[error("simulation error: {0}")]
    Simulation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
