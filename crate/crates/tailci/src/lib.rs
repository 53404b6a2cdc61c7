//! Tail-index and extreme-quantile inference for heavy-tailed data, with
//! confidence intervals that stay valid under second-order deviations from
//! an exact Pareto tail.
//!
//! The crate provides:
//!
//! - [`estimators`]: order statistics, Hill's estimator and its path over
//!   thresholds, the Weissman extreme-quantile extrapolation, and the
//!   reflected left-tail workflow;
//! - [`threshold`]: data-driven threshold selection from weighted
//!   log-spacing diagnostics;
//! - [`critical`]: Monte Carlo critical values for the weighted supremum
//!   of the Hill path's limit process, with a persistent table format;
//! - [`intervals`]: naive, honest (worst-case-bias aware), and
//!   threshold-snooping interval constructors for both targets;
//! - [`dgp`] and [`study`]: a simulation family and a seeded, reproducible
//!   coverage/length study harness.
//!
//! Monte Carlo loops fan out over rayon when the default `parallel`
//! feature is enabled; disabling it yields a dependency-free sequential
//! build with bit-identical results.

// `!(x > 0.0)` rejects NaN along with the out-of-range values; the
// suggested `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod critical;
pub mod dgp;
pub mod error;
pub mod estimators;
pub mod intervals;
pub mod sample;
pub mod study;
pub mod threshold;

mod par;
#[cfg(test)]
pub(crate) mod testutil;

pub use critical::{
    builtin_table, gaussian_g, simulate_sup_draws, simulate_wiener, sup_profile, sup_statistic,
    CriticalValueTable, CvEntry, CvLookup, PathSeed, Rational, SupDraws, SupStatistic, WienerPath,
    DEFAULT_BETAS, DEFAULT_R_LOWERS,
};
pub use dgp::{dgp_inverse, draw_sample, true_quantile, DgpConfig};
pub use error::{Error, Result};
pub use estimators::{
    hill, hill_path, left_tail_transform, restore_left_tail_interval, weissman_quantile,
    LeftTailSample, QuantileEstimate, TailIndexEstimate,
};
pub use intervals::{
    bias_bound, honest_ci_index, honest_ci_quantile, naive_ci_index, naive_ci_quantile,
    rule_of_thumb_budget, snooping_ci_index, snooping_ci_quantile, BiasBudget, Interval, Method,
    Provenance, Target, Thresholds,
};
pub use sample::Sample;
pub use study::{run_study, StudyCell, StudyParams, StudyResult, StudyRow};
pub use threshold::{
    c_criterion, criterion_trace, guillou_weights, select_k, t_statistic, Selection,
    SelectionConfig, SpacingVector,
};
