//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by estimators, interval constructors, and simulators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least {need} observations, have {have}")]
    TooFewObservations { have: usize, need: usize },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("{what} = {value} out of range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },

    #[error("order statistic {index} equals {value}; logs require strictly positive values")]
    NonPositiveOrderStatistic { index: usize, value: f64 },

    #[error("degenerate tail-index estimate (xi_hat = 0) at k = {k}")]
    DegenerateEstimate { k: usize },

    #[error("extrapolation requires k > n*p, got k = {k} with n*p = {np}")]
    ExtrapolationDirection { k: usize, np: f64 },

    #[error("r = {r} is below the grid resolution of a {m}-step path")]
    Resolution { r: f64, m: usize },

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no critical value tabulated for r_lower = {r_lower}, beta = {beta}")]
    MissingEntry { r_lower: f64, beta: f64 },

    #[error("interval endpoints inverted: lo = {lo} > hi = {hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("critical-value table format: {0}")]
    TableFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
