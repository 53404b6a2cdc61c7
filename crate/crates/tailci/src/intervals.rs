//! Confidence-interval constructors for the tail index and extreme
//! quantiles: naive, bias-aware honest, and threshold-snooping variants.
//!
//! Honest intervals widen the usual normal-approximation band by a
//! worst-case bias bound `A/(1+rho)` so coverage holds uniformly over a
//! neighborhood of tail distributions rather than only at the Pareto
//! center.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{hill, weissman_quantile};
use crate::sample::Sample;

/// Interval constructor tags: H* target the tail index, I* the quantile;
/// N = naive, O = honest (bias-aware), S = threshold snooping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    #[serde(rename = "HN")]
    Hn,
    #[serde(rename = "HO")]
    Ho,
    #[serde(rename = "HS")]
    Hs,
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "IO")]
    Io,
    #[serde(rename = "IS")]
    Is,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Hn,
        Method::Ho,
        Method::Hs,
        Method::In,
        Method::Io,
        Method::Is,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Hn => "HN",
            Method::Ho => "HO",
            Method::Hs => "HS",
            Method::In => "IN",
            Method::Io => "IO",
            Method::Is => "IS",
        }
    }

    /// True for the quantile-target constructors I*.
    pub fn targets_quantile(&self) -> bool {
        matches!(self, Method::In | Method::Io | Method::Is)
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HN" => Ok(Method::Hn),
            "HO" => Ok(Method::Ho),
            "HS" => Ok(Method::Hs),
            "IN" => Ok(Method::In),
            "IO" => Ok(Method::Io),
            "IS" => Ok(Method::Is),
            other => Err(Error::Config(format!(
                "unknown method '{other}', expected one of HN HO HS IN IO IS"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the interval covers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    TailIndex,
    Quantile { p: f64 },
}

/// Threshold(s) behind an interval: a single k, or the snooping grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Thresholds {
    Single { k: usize },
    Grid { k_lo: usize, k_hi: usize },
}

/// A closed confidence interval with its construction metadata.
///
/// `empty = true` marks a snooping intersection that came up empty; `lo`
/// and `hi` then hold the crossed endpoints (`lo > hi`) and the interval
/// contains nothing. Such intervals score as non-coverage with length 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub method: Method,
    pub target: Target,
    pub thresholds: Thresholds,
    pub empty: bool,
}

impl Interval {
    pub fn length(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        !self.empty && self.lo <= x && x <= self.hi
    }
}

/// How a bias budget was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    User,
    RuleOfThumb,
}

/// Second-order deviation budget `(A, rho)` with the derived worst-case
/// bias bound `A/(1+rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasBudget {
    pub a: f64,
    pub rho: f64,
    pub bound: f64,
    pub provenance: Provenance,
}

impl BiasBudget {
    /// A user-supplied budget.
    pub fn new(a: f64, rho: f64) -> Result<Self> {
        Ok(Self {
            a,
            rho,
            bound: bias_bound(a, rho)?,
            provenance: Provenance::User,
        })
    }
}

/// Worst-case asymptotic bias over deviations `|h(v) - h(0)| <= A v^rho`:
/// the supremum of `sqrt(r) * A r^rho / (1+rho)` over r in (0, 1], attained
/// at r = 1, hence `A/(1+rho)`.
pub fn bias_bound(a: f64, rho: f64) -> Result<f64> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("A must be nonnegative, got {a}")));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    Ok(a / (1.0 + rho))
}

/// Reference-distribution budget: `rho = 2 xi_hat` (Student-t reference)
/// and `A = 0.1 xi_hat (1 + 2 xi_hat) sqrt(k)`, so that the bias bound
/// contributes at most 10% of the estimated tail index to the half-width.
pub fn rule_of_thumb_budget(xi_hat: f64, k: usize) -> Result<BiasBudget> {
    if !(xi_hat > 0.0) || !xi_hat.is_finite() {
        return Err(Error::Domain(format!(
            "rule-of-thumb budget needs xi_hat > 0, got {xi_hat}"
        )));
    }
    if k < 1 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            lo: 1,
            hi: usize::MAX,
        });
    }
    let rho = 2.0 * xi_hat;
    let a = 0.1 * xi_hat * (1.0 + 2.0 * xi_hat) * (k as f64).sqrt();
    Ok(BiasBudget {
        a,
        rho,
        bound: a / (1.0 + rho),
        provenance: Provenance::RuleOfThumb,
    })
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::Domain(format!(
            "{name} must be positive, got {value}"
        )));
    }
    Ok(())
}

/// Naive normal-approximation interval for the tail index:
/// `xi_hat -+ z * xi_hat / sqrt(k)`.
pub fn naive_ci_index(sample: &Sample, k: usize, z: f64) -> Result<Interval> {
    check_positive("z", z)?;
    let est = hill(sample, k)?;
    let hw = z * est.xi_hat / (k as f64).sqrt();
    Ok(Interval {
        lo: est.xi_hat - hw,
        hi: est.xi_hat + hw,
        method: Method::Hn,
        target: Target::TailIndex,
        thresholds: Thresholds::Single { k },
        empty: false,
    })
}

/// Honest interval for the tail index:
/// `xi_hat -+ (xi_hat * q + bound) / sqrt(k)`, where `q` is the critical
/// value of the supremum statistic and `bound` the worst-case bias.
pub fn honest_ci_index(sample: &Sample, k: usize, q: f64, budget: &BiasBudget) -> Result<Interval> {
    check_positive("q", q)?;
    let est = hill(sample, k)?;
    let hw = (est.xi_hat * q + budget.bound) / (k as f64).sqrt();
    Ok(Interval {
        lo: est.xi_hat - hw,
        hi: est.xi_hat + hw,
        method: Method::Ho,
        target: Target::TailIndex,
        thresholds: Thresholds::Single { k },
        empty: false,
    })
}

/// All integer thresholds in `[ceil(r_lower * k_bar), k_bar]`.
fn snooping_grid(k_bar: usize, r_lower: f64) -> Result<std::ops::RangeInclusive<usize>> {
    if !(r_lower > 0.0 && r_lower <= 1.0) {
        return Err(Error::Config(format!(
            "snooping r_lower must be in (0, 1], got {r_lower}"
        )));
    }
    if k_bar < 1 {
        return Err(Error::Config("snooping needs k_bar >= 1".into()));
    }
    let k_lo = ((r_lower * k_bar as f64).ceil() as usize).max(1);
    Ok(k_lo..=k_bar)
}

/// Snooping interval for the tail index: the intersection of honest
/// intervals over every integer threshold in `[ceil(r_lower*k_bar), k_bar]`,
/// each with its own rule-of-thumb budget at `xi_hat(n, k_j)`. `q` must be
/// the critical value calibrated to the same `r_lower`.
pub fn snooping_ci_index(sample: &Sample, k_bar: usize, r_lower: f64, q: f64) -> Result<Interval> {
    let grid = snooping_grid(k_bar, r_lower)?;
    let (k_lo, k_hi) = (*grid.start(), *grid.end());
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for k_j in grid {
        let est = hill(sample, k_j)?;
        let budget = rule_of_thumb_budget(est.xi_hat, k_j)?;
        let piece = honest_ci_index(sample, k_j, q, &budget)?;
        lo = lo.max(piece.lo);
        hi = hi.min(piece.hi);
    }
    Ok(Interval {
        lo,
        hi,
        method: Method::Hs,
        target: Target::TailIndex,
        thresholds: Thresholds::Grid { k_lo, k_hi },
        empty: lo > hi,
    })
}

/// Naive interval for the 1-p quantile, multiplicative around the Weissman
/// estimate with relative half-width `z * xi_hat * log(k/(n*p)) / sqrt(k)`.
/// The lower endpoint is clamped at zero.
pub fn naive_ci_quantile(sample: &Sample, k: usize, p: f64, z: f64) -> Result<Interval> {
    check_positive("z", z)?;
    let est = weissman_quantile(sample, k, p)?;
    let log_d = log_extrapolation_depth(sample.n(), k, p)?;
    let rel = z * est.xi.xi_hat * log_d / (k as f64).sqrt();
    Ok(quantile_interval(Method::In, est.q_hat, rel, p, k))
}

/// Honest interval for the 1-p quantile with relative half-width
/// `log(k/(n*p)) * (xi_hat * q + bound) / sqrt(k)`. The lower endpoint is
/// clamped at zero.
pub fn honest_ci_quantile(
    sample: &Sample,
    k: usize,
    p: f64,
    q: f64,
    budget: &BiasBudget,
) -> Result<Interval> {
    check_positive("q", q)?;
    let est = weissman_quantile(sample, k, p)?;
    let log_d = log_extrapolation_depth(sample.n(), k, p)?;
    let rel = log_d * (est.xi.xi_hat * q + budget.bound) / (k as f64).sqrt();
    Ok(quantile_interval(Method::Io, est.q_hat, rel, p, k))
}

/// Snooping interval for the 1-p quantile, intersecting honest quantile
/// intervals over the same integer grid as [`snooping_ci_index`]. Grid
/// points with `k_j <= n*p` cannot extrapolate outward and are skipped;
/// if the whole grid is skipped the extrapolation direction is wrong.
pub fn snooping_ci_quantile(
    sample: &Sample,
    k_bar: usize,
    r_lower: f64,
    p: f64,
    q: f64,
) -> Result<Interval> {
    let grid = snooping_grid(k_bar, r_lower)?;
    let (k_lo, k_hi) = (*grid.start(), *grid.end());
    let np = sample.n() as f64 * p;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut used = 0usize;
    for k_j in grid {
        if k_j as f64 <= np {
            continue;
        }
        let est = hill(sample, k_j)?;
        let budget = rule_of_thumb_budget(est.xi_hat, k_j)?;
        let piece = honest_ci_quantile(sample, k_j, p, q, &budget)?;
        lo = lo.max(piece.lo);
        hi = hi.min(piece.hi);
        used += 1;
    }
    if used == 0 {
        return Err(Error::ExtrapolationDirection { k: k_hi, np });
    }
    Ok(Interval {
        lo,
        hi,
        method: Method::Is,
        target: Target::Quantile { p },
        thresholds: Thresholds::Grid { k_lo, k_hi },
        empty: lo > hi,
    })
}

/// `log(k / (n*p))`, positive exactly when the extrapolation points outward.
fn log_extrapolation_depth(n: usize, k: usize, p: f64) -> Result<f64> {
    let np = n as f64 * p;
    let log_d = (k as f64 / np).ln();
    if !(log_d > 0.0) {
        return Err(Error::ExtrapolationDirection { k, np });
    }
    Ok(log_d)
}

fn quantile_interval(method: Method, q_hat: f64, rel: f64, p: f64, k: usize) -> Interval {
    Interval {
        lo: (q_hat * (1.0 - rel)).max(0.0),
        hi: q_hat * (1.0 + rel),
        method,
        target: Target::Quantile { p },
        thresholds: Thresholds::Single { k },
        empty: false,
    }
}
