use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected} values, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("positivity lost at node {node}: u = {value:e}")]
    PositivityLoss { node: usize, value: f64 },

    #[error("inadmissible data: {0}")]
    Inadmissible(String),

    #[error("condition (i) violated: mean of f is {mean_f:e}")]
    ConditionOne { mean_f: f64 },

    #[error("division by a vanishing quantity: {0}")]
    Division(String),

    #[error("argument outside its domain: {0}")]
    Domain(String),

    #[error("f is not Morse: {0}")]
    NotMorse(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("positivity lost at t = {t}: step size {dt:e} fell below dt_min")]
    StepCollapse { t: f64, dt: f64 },

    #[error("left X*: mean of f u^2# is {denom:e} at t = {t}")]
    LeftAdmissibleSet { t: f64, denom: f64 },

    #[error("normalization stagnated after {iterations} iterations, best residual {residual:e}")]
    Stagnation { iterations: usize, residual: f64 },

    #[error("input error: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
