//! Data-driven threshold choice from weighted log-spacing diagnostics.
//!
//! Normalized spacings `Z_i = i * log(Y_(i) / Y_(i+1))` of the descending
//! order statistics are i.i.d. exponential under an exact Pareto tail. The
//! statistic `T_k` contrasts them with antisymmetric weights, so it has
//! zero mean and unit variance while the Pareto approximation holds and
//! drifts once bias kicks in. A moving average `C_k` of `T_k^2` crossing a
//! critical level flags the drift, and the selection rule returns the
//! first threshold from which the flag stays raised.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sample::Sample;

/// Tuning constants of the selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectionConfig {
    /// Critical level for the moving-average criterion.
    pub c_crit: f64,
    /// Lower bracket for the threshold as a fraction of n.
    pub k_min_frac: f64,
    /// Upper bracket for the threshold as a fraction of n.
    pub k_max_frac: f64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self {
            c_crit: 1.25,
            k_min_frac: 0.01,
            k_max_frac: 0.99,
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_crit > 1.0) || !self.c_crit.is_finite() {
            return Err(Error::Config(format!(
                "c_crit must exceed 1, got {}",
                self.c_crit
            )));
        }
        if !(self.k_min_frac > 0.0 && self.k_min_frac < 1.0)
            || !(self.k_max_frac > 0.0 && self.k_max_frac < 1.0)
            || self.k_min_frac >= self.k_max_frac
        {
            return Err(Error::Config(format!(
                "need 0 < k_min_frac < k_max_frac < 1, got [{}, {}]",
                self.k_min_frac, self.k_max_frac
            )));
        }
        Ok(())
    }
}

/// Normalized log-spacings of the descending order statistics, defined for
/// every index whose pair of order statistics is strictly positive.
#[derive(Debug, Clone)]
pub struct SpacingVector {
    z: Vec<f64>,
}

impl SpacingVector {
    /// Spacings `z[i] = (i+1) * log(sorted[i] / sorted[i+1])` over the
    /// strictly positive prefix of the order statistics. With all
    /// observations positive the vector has length `n - 1`.
    pub fn new(sample: &Sample) -> Result<Self> {
        let pos = sample.positive_prefix_len();
        if pos < 2 {
            return Err(Error::NonPositiveOrderStatistic {
                index: pos,
                value: sample.sorted_desc()[pos],
            });
        }
        let sorted = sample.sorted_desc();
        let z = (0..pos - 1)
            .map(|i| (i + 1) as f64 * (sorted[i].ln() - sorted[i + 1].ln()))
            .collect();
        Ok(Self { z })
    }

    /// Spacings indexed from zero; entry `i` pairs the (i+1)-th and
    /// (i+2)-th largest order statistics.
    pub fn as_slice(&self) -> &[f64] {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// Antisymmetric contrast weights `w_j = k - 2j + 1` for `j = 1..=k`.
/// They satisfy `w_j = -w_{k-j+1}` and sum to zero exactly.
pub fn guillou_weights(k: usize) -> Vec<f64> {
    (1..=k)
        .map(|j| (k as f64) - 2.0 * (j as f64) + 1.0)
        .collect()
}

/// Prefix-sum machinery shared by the diagnostic statistics, so the one-off
/// operations and the selection scan compute bit-identical values.
struct Diagnostics {
    /// sz[k] = Z_1 + ... + Z_k
    sz: Vec<f64>,
    /// sjz[k] = 1*Z_1 + ... + k*Z_k
    sjz: Vec<f64>,
    /// st2[k] = T_2^2 + ... + T_k^2, filled up to the first degenerate k
    st2: Vec<f64>,
    /// largest k whose statistic touches only positive order statistics
    max_k: usize,
    /// smallest k with a zero tail-index estimate, if any
    first_degenerate: Option<usize>,
    /// first nonpositive order statistic, when positivity truncates
    cut: Option<(usize, f64)>,
    n: usize,
}

impl Diagnostics {
    fn new(sample: &Sample) -> Result<Self> {
        let n = sample.n();
        let spacings = SpacingVector::new(sample)?;
        // T_k needs Z_1..Z_k, i.e. the top k+1 order statistics positive
        let max_k = spacings.len().min(n - 1);
        let cut = if spacings.len() < n - 1 {
            let index = spacings.len() + 1;
            Some((index, sample.sorted_desc()[index]))
        } else {
            None
        };
        let mut sz = vec![0.0; max_k + 1];
        let mut sjz = vec![0.0; max_k + 1];
        for k in 1..=max_k {
            let z = spacings.as_slice()[k - 1];
            sz[k] = sz[k - 1] + z;
            sjz[k] = sjz[k - 1] + k as f64 * z;
        }
        let mut st2 = vec![0.0; max_k + 1];
        let mut first_degenerate = None;
        for k in 2..=max_k {
            match Self::t_from_prefix(&sz, &sjz, k) {
                Some(t) => st2[k] = st2[k - 1] + t * t,
                None => {
                    first_degenerate = Some(k);
                    break;
                }
            }
        }
        Ok(Self {
            sz,
            sjz,
            st2,
            max_k,
            first_degenerate,
            cut,
            n,
        })
    }

    fn t_from_prefix(sz: &[f64], sjz: &[f64], k: usize) -> Option<f64> {
        let kf = k as f64;
        let xi = sz[k] / kf;
        if xi <= 0.0 {
            return None;
        }
        let u = (kf + 1.0) * sz[k] - 2.0 * sjz[k];
        let w2 = kf * (kf * kf - 1.0) / 3.0;
        Some(u / (w2.sqrt() * xi))
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k < 2 || k > self.n - 1 {
            return Err(Error::OutOfRange {
                what: "k",
                value: k,
                lo: 2,
                hi: self.n - 1,
            });
        }
        if k > self.max_k {
            let (index, value) = self.cut.expect("k > max_k implies truncation");
            return Err(Error::NonPositiveOrderStatistic { index, value });
        }
        Ok(())
    }

    fn t_stat(&self, k: usize) -> Result<f64> {
        self.check_k(k)?;
        Self::t_from_prefix(&self.sz, &self.sjz, k).ok_or(Error::DegenerateEstimate { k })
    }

    fn c_stat(&self, k: usize) -> Result<f64> {
        self.check_k(k)?;
        let half = k / 2;
        let lo = k.saturating_sub(half).max(2);
        let hi = (k + half).min(self.max_k);
        if let Some(d) = self.first_degenerate {
            if hi >= d {
                return Err(Error::DegenerateEstimate { k: d });
            }
        }
        let window = (hi - lo + 1) as f64;
        let sum = (self.st2[hi] - self.st2[lo - 1]).max(0.0);
        Ok((sum / window).sqrt())
    }

    fn bounds(&self, cfg: &SelectionConfig) -> Result<(usize, usize)> {
        let n = self.n as f64;
        let lower = ((cfg.k_min_frac * n).ceil() as usize).max(2);
        let upper = ((cfg.k_max_frac * n).floor() as usize).min(self.n - 1);
        if lower > upper {
            return Err(Error::Config(format!(
                "selection bracket [{lower}, {upper}] is empty for n = {}",
                self.n
            )));
        }
        Ok((lower, upper))
    }
}

/// The weighted-spacing statistic `T_k`, zero-mean and unit-variance under
/// an exact Pareto tail.
pub fn t_statistic(sample: &Sample, k: usize) -> Result<f64> {
    Diagnostics::new(sample)?.t_stat(k)
}

/// Root moving average of `T_t^2` over the window `t in [k - k/2, k + k/2]`,
/// truncated to the valid range.
pub fn c_criterion(sample: &Sample, k: usize) -> Result<f64> {
    Diagnostics::new(sample)?.c_stat(k)
}

/// Outcome of the threshold-selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub k: usize,
    /// The criterion never stayed above `c_crit`; the upper bracket bound
    /// was returned instead.
    pub fallback: bool,
    pub lower: usize,
    pub upper: usize,
}

/// The criterion values over the configured bracket, for plots and for the
/// selection scan.
pub fn criterion_trace(sample: &Sample, cfg: &SelectionConfig) -> Result<Vec<(usize, f64)>> {
    cfg.validate()?;
    let diag = Diagnostics::new(sample)?;
    let (lower, upper) = diag.bounds(cfg)?;
    (lower..=upper)
        .map(|k| diag.c_stat(k).map(|c| (k, c)))
        .collect()
}

/// The smallest in-bracket `k` from which the criterion exceeds `c_crit`
/// at every larger in-bracket threshold. Falls back to the upper bracket
/// bound (flagged) when no such `k` exists.
pub fn select_k(sample: &Sample, cfg: &SelectionConfig) -> Result<Selection> {
    let trace = criterion_trace(sample, cfg)?;
    let lower = trace.first().expect("bracket checked nonempty").0;
    let upper = trace.last().expect("bracket checked nonempty").0;
    let last_below = trace
        .iter()
        .rev()
        .find(|(_, c)| !(*c > cfg.c_crit))
        .map(|(k, _)| *k);
    let (k, fallback) = match last_below {
        None => (lower, false),
        Some(t) if t == upper => (upper, true),
        Some(t) => (t + 1, false),
    };
    Ok(Selection {
        k,
        fallback,
        lower,
        upper,
    })
}
