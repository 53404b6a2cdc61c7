//! Seeded Monte Carlo coverage and length study across a grid of
//! data-generating processes, thresholds chosen per replication.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::critical::CriticalValueTable;
use crate::dgp::{draw_sample, true_quantile, DgpConfig};
use crate::error::{Error, Result};
use crate::estimators::hill;
use crate::intervals::{
    honest_ci_index, honest_ci_quantile, naive_ci_index, naive_ci_quantile, rule_of_thumb_budget,
    snooping_ci_index, snooping_ci_quantile, Interval, Method,
};
use crate::par;
use crate::sample::Sample;
use crate::threshold::{select_k, SelectionConfig};

/// One cell of the study grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyCell {
    pub dgp: DgpConfig,
    pub n: usize,
}

/// Knobs of the study, defaulting to the reference simulation design:
/// 95% intervals, 1% tail quantile target, snooping down to half the
/// selected threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyParams {
    pub methods: Vec<Method>,
    pub n_reps: usize,
    /// Tail probability of the quantile target.
    pub p: f64,
    /// Two-sided nominal level for honest and snooping intervals.
    pub beta: f64,
    /// Lower endpoint of the snooping range as a fraction of the selected
    /// threshold.
    pub snoop_r_lower: f64,
    /// Normal critical value of the naive intervals.
    pub z_naive: f64,
    pub selection: SelectionConfig,
    pub master_seed: u64,
}

impl Default for StudyParams {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            n_reps: 5000,
            p: 0.01,
            beta: 0.05,
            snoop_r_lower: 0.5,
            z_naive: 1.96,
            selection: SelectionConfig::default(),
            master_seed: 0,
        }
    }
}

/// Aggregate for one (cell, method) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub xi0: f64,
    pub c0: f64,
    pub n: usize,
    pub method: Method,
    /// Fraction of all replications whose interval covered the truth;
    /// failed replications count as misses.
    pub coverage: f64,
    /// Mean length over replications that produced an interval; empty
    /// snooping intersections contribute length zero.
    pub avg_length: f64,
    pub n_reps: usize,
    /// Replications where this method could not produce an interval.
    pub failures: usize,
}

/// Full study output. Identical parameters and seed reproduce this
/// bit for bit regardless of thread count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
    pub master_seed: u64,
}

impl StudyResult {
    /// CSV mirror of the study layout, one row per cell and method.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("xi0,c0,n,method,coverage,avg_length,n_reps,failures\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.xi0, r.c0, r.n, r.method, r.coverage, r.avg_length, r.n_reps, r.failures
            ));
        }
        out
    }
}

enum Outcome {
    Scored { hit: bool, length: f64 },
    Failed,
}

fn score(interval: Result<Interval>, truth: f64) -> Outcome {
    match interval {
        Ok(iv) => Outcome::Scored {
            hit: iv.contains(truth),
            length: iv.length(),
        },
        Err(_) => Outcome::Failed,
    }
}

struct CriticalValues {
    q_full: Option<f64>,
    q_snoop: Option<f64>,
}

fn resolve_critical_values(
    params: &StudyParams,
    table: &CriticalValueTable,
) -> Result<CriticalValues> {
    let needs_full = params
        .methods
        .iter()
        .any(|m| matches!(m, Method::Ho | Method::Io));
    let needs_snoop = params
        .methods
        .iter()
        .any(|m| matches!(m, Method::Hs | Method::Is));
    Ok(CriticalValues {
        q_full: if needs_full {
            Some(table.lookup(1.0, params.beta)?.q)
        } else {
            None
        },
        q_snoop: if needs_snoop {
            Some(table.lookup(params.snoop_r_lower, params.beta)?.q)
        } else {
            None
        },
    })
}

fn run_one_rep(
    cell: &StudyCell,
    params: &StudyParams,
    cv: &CriticalValues,
    stream: u64,
) -> Vec<Outcome> {
    let all_failed = || {
        params
            .methods
            .iter()
            .map(|_| Outcome::Failed)
            .collect::<Vec<_>>()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.master_seed);
    rng.set_stream(stream);
    let sample: Sample = match draw_sample(cell.n, &cell.dgp, &mut rng) {
        Ok(s) => s,
        Err(_) => return all_failed(),
    };
    let selection = match select_k(&sample, &params.selection) {
        Ok(s) => s,
        Err(_) => return all_failed(),
    };
    let k_bar = selection.k;
    let xi0 = cell.dgp.xi0();
    let q_truth = true_quantile(params.p, &cell.dgp).expect("p validated");

    let budget = hill(&sample, k_bar).and_then(|est| rule_of_thumb_budget(est.xi_hat, k_bar));

    params
        .methods
        .iter()
        .map(|method| match method {
            Method::Hn => score(naive_ci_index(&sample, k_bar, params.z_naive), xi0),
            Method::Ho => match (&budget, cv.q_full) {
                (Ok(b), Some(q)) => score(honest_ci_index(&sample, k_bar, q, b), xi0),
                _ => Outcome::Failed,
            },
            Method::Hs => match cv.q_snoop {
                Some(q) => score(
                    snooping_ci_index(&sample, k_bar, params.snoop_r_lower, q),
                    xi0,
                ),
                None => Outcome::Failed,
            },
            Method::In => score(
                naive_ci_quantile(&sample, k_bar, params.p, params.z_naive),
                q_truth,
            ),
            Method::Io => match (&budget, cv.q_full) {
                (Ok(b), Some(q)) => {
                    score(honest_ci_quantile(&sample, k_bar, params.p, q, b), q_truth)
                }
                _ => Outcome::Failed,
            },
            Method::Is => match cv.q_snoop {
                Some(q) => score(
                    snooping_ci_quantile(&sample, k_bar, params.snoop_r_lower, params.p, q),
                    q_truth,
                ),
                None => Outcome::Failed,
            },
        })
        .collect()
}

/// Runs the full grid. Replication `r` of cell `c` draws from stream
/// `(c << 32) | r` of the master seed, so every cell is independently
/// reproducible and the result does not depend on scheduling.
pub fn run_study(
    cells: &[StudyCell],
    params: &StudyParams,
    table: &CriticalValueTable,
) -> Result<StudyResult> {
    if cells.is_empty() {
        return Err(Error::Config("study grid is empty".into()));
    }
    if params.n_reps < 1 {
        return Err(Error::Config("need at least one replication".into()));
    }
    if !(params.p > 0.0 && params.p < 1.0) {
        return Err(Error::Config(format!(
            "tail probability must be in (0, 1), got {}",
            params.p
        )));
    }
    if cells.len() > u32::MAX as usize || params.n_reps > u32::MAX as usize {
        return Err(Error::Config("grid too large for stream derivation".into()));
    }
    if params.methods.is_empty() {
        return Err(Error::Config("no methods requested".into()));
    }
    params.selection.validate()?;
    let cv = resolve_critical_values(params, table)?;

    let mut rows = Vec::with_capacity(cells.len() * params.methods.len());
    for (cell_idx, cell) in cells.iter().enumerate() {
        let outcomes = par::map_indexed(params.n_reps, |rep| {
            let stream = ((cell_idx as u64) << 32) | rep as u64;
            run_one_rep(cell, params, &cv, stream)
        });
        for (m_idx, method) in params.methods.iter().enumerate() {
            let mut hits = 0usize;
            let mut total_length = 0.0;
            let mut failures = 0usize;
            for rep in &outcomes {
                match rep[m_idx] {
                    Outcome::Scored { hit, length } => {
                        hits += hit as usize;
                        total_length += length;
                    }
                    Outcome::Failed => failures += 1,
                }
            }
            let scored = params.n_reps - failures;
            rows.push(StudyRow {
                xi0: cell.dgp.xi0(),
                c0: cell.dgp.c0(),
                n: cell.n,
                method: *method,
                coverage: hits as f64 / params.n_reps as f64,
                avg_length: if scored > 0 {
                    total_length / scored as f64
                } else {
                    0.0
                },
                n_reps: params.n_reps,
                failures,
            });
        }
    }
    Ok(StudyResult {
        rows,
        master_seed: params.master_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::{CriticalValueTable, CvEntry, Rational};

    fn toy_table() -> CriticalValueTable {
        CriticalValueTable {
            entries: vec![
                CvEntry {
                    r_lower: Rational::new(1, 1),
                    beta: 0.05,
                    q: 1.96,
                },
                CvEntry {
                    r_lower: Rational::new(1, 2),
                    beta: 0.05,
                    q: 2.54,
                },
            ],
            n_sims: 1000,
            n_steps: 100,
            seed: 0,
        }
    }

    fn small_params(methods: Vec<Method>, n_reps: usize, seed: u64) -> StudyParams {
        StudyParams {
            methods,
            n_reps,
            master_seed: seed,
            ..StudyParams::default()
        }
    }

    #[test]
    fn study_is_deterministic() {
        let cells = [StudyCell {
            dgp: DgpConfig::new(1.0, 0.0).unwrap(),
            n: 120,
        }];
        let params = small_params(vec![Method::Hn, Method::Ho], 30, 9);
        let a = run_study(&cells, &params, &toy_table()).unwrap();
        let b = run_study(&cells, &params, &toy_table()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn study_scores_methods_separately() {
        let cells = [StudyCell {
            dgp: DgpConfig::new(1.0, 0.5).unwrap(),
            n: 150,
        }];
        let params = small_params(Method::ALL.to_vec(), 25, 3);
        let result = run_study(&cells, &params, &toy_table()).unwrap();
        assert_eq!(result.rows.len(), 6);
        for row in &result.rows {
            assert!(row.coverage >= 0.0 && row.coverage <= 1.0);
            assert!(row.avg_length >= 0.0);
            assert_eq!(row.n_reps, 25);
            assert!(row.failures <= 25);
        }
        // honest index interval is wider than the naive one by construction
        let len = |m: Method| {
            result
                .rows
                .iter()
                .find(|r| r.method == m)
                .unwrap()
                .avg_length
        };
        assert!(len(Method::Ho) >= len(Method::Hn));
    }

    #[test]
    fn study_missing_table_entry_fails_fast() {
        let cells = [StudyCell {
            dgp: DgpConfig::new(1.0, 0.0).unwrap(),
            n: 100,
        }];
        let mut params = small_params(vec![Method::Hs], 5, 1);
        params.snoop_r_lower = 0.33;
        assert!(matches!(
            run_study(&cells, &params, &toy_table()),
            Err(Error::MissingEntry { .. })
        ));
    }

    #[test]
    fn study_rejects_bad_config() {
        let cells = [StudyCell {
            dgp: DgpConfig::new(1.0, 0.0).unwrap(),
            n: 100,
        }];
        let params = small_params(vec![], 5, 1);
        assert!(run_study(&cells, &params, &toy_table()).is_err());
        let params = small_params(vec![Method::Hn], 0, 1);
        assert!(run_study(&cells, &params, &toy_table()).is_err());
        assert!(run_study(&[], &small_params(vec![Method::Hn], 5, 1), &toy_table()).is_err());
    }

    #[test]
    fn csv_layout_is_stable() {
        let cells = [StudyCell {
            dgp: DgpConfig::new(0.5, 0.0).unwrap(),
            n: 100,
        }];
        let params = small_params(vec![Method::Hn], 10, 2);
        let result = run_study(&cells, &params, &toy_table()).unwrap();
        let csv = result.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "xi0,c0,n,method,coverage,avg_length,n_reps,failures"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("0.5,0,100,HN,"));
    }
}
