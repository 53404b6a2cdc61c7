//! Output records with frozen JSON field names and CSV headers.

use serde::Serialize;
use tailci::{BiasBudget, Interval, Method, Provenance, Target, Thresholds};

#[derive(Debug, Serialize)]
pub struct PathPoint {
    pub k: usize,
    pub xi_hat: f64,
}

#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub n: usize,
    pub k: usize,
    pub k_source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback: Option<bool>,
    pub xi_hat: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dropped: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hill_path: Option<Vec<PathPoint>>,
}

impl EstimateReport {
    /// Tidy CSV: the Hill-path trace when present, else a one-row summary.
    pub fn to_csv(&self) -> String {
        match &self.hill_path {
            Some(path) => {
                let mut out = String::from("k,xi_hat\n");
                for p in path {
                    out.push_str(&format!("{},{}\n", p.k, p.xi_hat));
                }
                out
            }
            None => format!(
                "n,k,k_source,xi_hat\n{},{},{},{}\n",
                self.n, self.k, self.k_source, self.xi_hat
            ),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TracePoint {
    pub k: usize,
    pub c: f64,
}

#[derive(Debug, Serialize)]
pub struct SelectKReport {
    pub n: usize,
    pub k_hat: usize,
    pub fallback: bool,
    pub lower: usize,
    pub upper: usize,
    pub c_crit: f64,
    pub trace: Vec<TracePoint>,
}

impl SelectKReport {
    /// Tidy CSV of the criterion trace for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,c\n");
        for p in &self.trace {
            out.push_str(&format!("{},{}\n", p.k, p.c));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct IntervalRecord {
    pub method: &'static str,
    pub target: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub k_lo: usize,
    pub k_hi: usize,
    pub lo: f64,
    pub hi: f64,
    /// Critical multiplier used: the normal z for naive methods, the
    /// supremum quantile for honest and snooping methods.
    pub q: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub flags: Vec<String>,
}

impl IntervalRecord {
    pub fn new(interval: &Interval, q: f64, budget: Option<&BiasBudget>) -> Self {
        let (k_lo, k_hi) = match interval.thresholds {
            Thresholds::Single { k } => (k, k),
            Thresholds::Grid { k_lo, k_hi } => (k_lo, k_hi),
        };
        let (target, p) = match interval.target {
            Target::TailIndex => ("tail_index", None),
            Target::Quantile { p } => ("quantile", Some(p)),
        };
        let mut flags = Vec::new();
        if interval.empty {
            flags.push("empty".to_string());
        }
        if matches!(interval.method, Method::Hs | Method::Is) {
            flags.push("per_k_budget".to_string());
        }
        if let Some(b) = budget {
            if b.provenance == Provenance::RuleOfThumb {
                flags.push("rule_of_thumb".to_string());
            }
        }
        Self {
            method: interval.method.as_str(),
            target,
            p,
            k_lo,
            k_hi,
            lo: interval.lo,
            hi: interval.hi,
            q,
            a: budget.map(|b| b.a),
            rho: budget.map(|b| b.rho),
            bound: budget.map(|b| b.bound),
            flags,
        }
    }

    pub const CSV_HEADER: &'static str = "method,target,p,k_lo,k_hi,lo,hi,q,a,rho,bound,flags";

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.method,
            self.target,
            opt(self.p),
            self.k_lo,
            self.k_hi,
            self.lo,
            self.hi,
            self.q,
            opt(self.a),
            opt(self.rho),
            opt(self.bound),
            self.flags.join(";"),
        )
    }
}

#[derive(Debug, Serialize)]
pub struct CiReport {
    pub n: usize,
    pub k: usize,
    pub k_source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dropped: Option<usize>,
    pub beta: f64,
    pub intervals: Vec<IntervalRecord>,
}

impl CiReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(IntervalRecord::CSV_HEADER);
        out.push('\n');
        for r in &self.intervals {
            out.push_str(&r.to_csv_row());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct CvTableReport {
    pub n_sims: usize,
    pub n_steps: usize,
    pub seed: u64,
    pub entries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub written_to: Option<String>,
}
