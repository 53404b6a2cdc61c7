//! Hill's tail-index estimator, the Weissman extreme-quantile extrapolation,
//! and the reflected left-tail workflow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intervals::Interval;
use crate::sample::Sample;

/// Hill estimate at threshold `k`, with the inputs that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailIndexEstimate {
    pub xi_hat: f64,
    pub k: usize,
    pub n: usize,
}

/// Average log-spacing of the top `k` order statistics over the (k+1)-th.
///
/// Requires `1 <= k <= n-1` and a strictly positive (k+1)-th order
/// statistic. The estimate is nonnegative, and zero exactly when the top
/// k+1 order statistics are all equal.
pub fn hill(sample: &Sample, k: usize) -> Result<TailIndexEstimate> {
    let n = sample.n();
    if k < 1 || k > n - 1 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            lo: 1,
            hi: n - 1,
        });
    }
    let sorted = sample.sorted_desc();
    let anchor = sorted[k];
    if anchor <= 0.0 {
        return Err(Error::NonPositiveOrderStatistic {
            index: k,
            value: anchor,
        });
    }
    let log_anchor = anchor.ln();
    let sum: f64 = sorted[..k].iter().map(|y| y.ln() - log_anchor).sum();
    Ok(TailIndexEstimate {
        xi_hat: sum / k as f64,
        k,
        n,
    })
}

/// One Hill estimate per integer threshold in `[k_lo, k_hi]`, each identical
/// to an independent `hill` call.
pub fn hill_path(sample: &Sample, k_lo: usize, k_hi: usize) -> Result<Vec<TailIndexEstimate>> {
    if k_lo > k_hi {
        return Err(Error::Config(format!(
            "hill path needs k_lo <= k_hi, got [{k_lo}, {k_hi}]"
        )));
    }
    (k_lo..=k_hi).map(|k| hill(sample, k)).collect()
}

/// Extreme-quantile estimate extrapolated beyond the sample range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileEstimate {
    pub q_hat: f64,
    /// Tail probability of the 1-p target quantile.
    pub p: f64,
    pub k: usize,
    pub xi: TailIndexEstimate,
}

/// Weissman estimator of the 1-p quantile: the (k+1)-th largest order
/// statistic scaled by `(k/(n*p))^xi_hat`. Requires `n*p <= k` so the
/// extrapolation points outward; at `n*p = k` the scale factor is one and
/// the estimate reduces to the order statistic itself.
pub fn weissman_quantile(sample: &Sample, k: usize, p: f64) -> Result<QuantileEstimate> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "tail probability must be in (0, 1), got {p}"
        )));
    }
    let xi = hill(sample, k)?;
    let np = sample.n() as f64 * p;
    if np > k as f64 {
        return Err(Error::ExtrapolationDirection { k, np });
    }
    let anchor = sample.sorted_desc()[k];
    Ok(QuantileEstimate {
        q_hat: anchor * (k as f64 / np).powf(xi.xi_hat),
        p,
        k,
        xi,
    })
}

/// Result of reflecting data below a cutoff: `y = cutoff - b` for every
/// observation `b < cutoff`.
#[derive(Debug, Clone)]
pub struct LeftTailSample {
    pub sample: Sample,
    /// Observations at or above the cutoff, removed before reflection.
    pub dropped: usize,
    pub cutoff: f64,
}

/// Reflects the left tail of `values` around `cutoff` so right-tail
/// machinery applies to extremely small observations.
pub fn left_tail_transform(values: &[f64], cutoff: f64) -> Result<LeftTailSample> {
    if !cutoff.is_finite() {
        return Err(Error::Domain(format!(
            "cutoff must be finite, got {cutoff}"
        )));
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let kept: Vec<f64> = values
        .iter()
        .filter(|b| **b < cutoff)
        .map(|b| cutoff - b)
        .collect();
    let dropped = values.len() - kept.len();
    let sample = Sample::new(kept)?;
    Ok(LeftTailSample {
        sample,
        dropped,
        cutoff,
    })
}

/// Maps an interval for the reflected variable back to the original scale:
/// `[max(clamp_at, cutoff - hi), cutoff - lo]`, endpoints re-ordered by the
/// reflection. Both endpoints are floored at `clamp_at`.
pub fn restore_left_tail_interval(
    interval: &Interval,
    cutoff: f64,
    clamp_at: f64,
) -> Result<Interval> {
    if interval.lo > interval.hi {
        return Err(Error::InvalidInterval {
            lo: interval.lo,
            hi: interval.hi,
        });
    }
    let lo = (cutoff - interval.hi).max(clamp_at);
    let hi = (cutoff - interval.lo).max(clamp_at);
    Ok(Interval {
        lo,
        hi,
        ..interval.clone()
    })
}
