//! `tailci`: tail-index and extreme-quantile inference from the command
//! line, with bias-aware confidence intervals and a reproducible Monte
//! Carlo study harness.

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod errors;
mod input;
mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use errors::CliError;
use report::{
    CiReport, CvTableReport, EstimateReport, IntervalRecord, PathPoint, SelectKReport, TracePoint,
};
use tailci::{
    builtin_table, criterion_trace, hill, hill_path, honest_ci_index, honest_ci_quantile,
    left_tail_transform, naive_ci_index, naive_ci_quantile, restore_left_tail_interval,
    rule_of_thumb_budget, run_study, select_k, simulate_sup_draws, snooping_ci_index,
    snooping_ci_quantile, BiasBudget, CriticalValueTable, DgpConfig, Method, Rational, Sample,
    Selection, SelectionConfig, StudyCell, StudyParams,
};

const DEFAULT_SEED: u64 = 42;
const CV_TABLE_ENV: &str = "TAILCI_CV_TABLE";

#[derive(Parser)]
#[command(
    name = "tailci",
    version,
    about = "Honest confidence intervals for heavy-tail inference",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed for every randomized routine.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct InputOpts {
    /// CSV file with one value per row, or a named column.
    #[arg(long)]
    input: PathBuf,

    /// Column name when the file has several columns.
    #[arg(long)]
    column: Option<String>,

    /// Multiply every observation by this factor before anything else.
    #[arg(long)]
    scale: Option<f64>,

    /// Analyze the left tail below this cutoff via reflection.
    #[arg(long)]
    cutoff: Option<f64>,
}

#[derive(Args)]
struct SelectionOpts {
    /// Critical level of the threshold-selection criterion.
    #[arg(long, default_value_t = 1.25)]
    c_crit: f64,

    /// Lower bracket for the threshold as a fraction of n.
    #[arg(long, default_value_t = 0.01)]
    k_min_frac: f64,

    /// Upper bracket for the threshold as a fraction of n.
    #[arg(long, default_value_t = 0.99)]
    k_max_frac: f64,
}

impl SelectionOpts {
    fn config(&self) -> SelectionConfig {
        SelectionConfig {
            c_crit: self.c_crit,
            k_min_frac: self.k_min_frac,
            k_max_frac: self.k_max_frac,
        }
    }
}

#[derive(Args)]
struct BudgetOpts {
    /// Deviation scale of an explicit bias budget (with --rho).
    #[arg(long = "A", value_name = "A")]
    a: Option<f64>,

    /// Deviation decay rate of an explicit bias budget (with --A).
    #[arg(long)]
    rho: Option<f64>,

    /// Use the data-driven rule-of-thumb budget (the default).
    #[arg(long, conflicts_with_all = ["a", "rho"])]
    rule_of_thumb: bool,
}

#[derive(Args)]
struct CvTableOpts {
    /// Critical-value table file; falls back to $TAILCI_CV_TABLE, then to
    /// the table shipped with the binary.
    #[arg(long)]
    cv_table: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the tail index, optionally along a whole threshold path.
    Estimate {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        selection: SelectionOpts,
        /// Explicit threshold instead of the data-driven choice.
        #[arg(long)]
        k: Option<usize>,
        /// Also report the Hill path over "K_LO:K_HI".
        #[arg(long, value_name = "K_LO:K_HI")]
        path_range: Option<String>,
    },

    /// Choose the threshold from the spacing diagnostic; reports the trace.
    SelectK {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        selection: SelectionOpts,
    },

    /// Confidence intervals for the tail index (methods HN, HO, HS).
    Ci {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        selection: SelectionOpts,
        #[command(flatten)]
        budget: BudgetOpts,
        #[command(flatten)]
        cv: CvTableOpts,
        /// Explicit threshold instead of the data-driven choice.
        #[arg(long)]
        k: Option<usize>,
        /// Two-sided nominal level.
        #[arg(long, default_value_t = 0.05)]
        beta: f64,
        /// Lower endpoint of the snooping range, e.g. "1/2".
        #[arg(long, default_value = "1/2", value_parser = input::parse_r_lower)]
        r_lower: f64,
        /// Normal critical value for the naive interval.
        #[arg(long, default_value_t = 1.96)]
        z: f64,
        /// Comma-separated subset of HN,HO,HS.
        #[arg(long, default_value = "HN,HO,HS", value_delimiter = ',')]
        methods: Vec<Method>,
    },

    /// Confidence intervals for an extreme quantile (methods IN, IO, IS).
    QuantileCi {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        selection: SelectionOpts,
        #[command(flatten)]
        budget: BudgetOpts,
        #[command(flatten)]
        cv: CvTableOpts,
        /// Explicit threshold instead of the data-driven choice.
        #[arg(long)]
        k: Option<usize>,
        /// Tail probability of the 1-p target quantile.
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        /// Two-sided nominal level.
        #[arg(long, default_value_t = 0.05)]
        beta: f64,
        /// Lower endpoint of the snooping range, e.g. "1/2".
        #[arg(long, default_value = "1/2", value_parser = input::parse_r_lower)]
        r_lower: f64,
        /// Normal critical value for the naive interval.
        #[arg(long, default_value_t = 1.96)]
        z: f64,
        /// Comma-separated subset of IN,IO,IS.
        #[arg(long, default_value = "IN,IO,IS", value_delimiter = ',')]
        methods: Vec<Method>,
    },

    /// Simulate a critical-value table and persist it.
    CvTable {
        /// Monte Carlo draws (at least 1000).
        #[arg(long, default_value_t = 20_000)]
        n_sims: usize,
        /// Path discretization steps.
        #[arg(long, default_value_t = 50_000)]
        steps: usize,
        /// Comma-separated snooping lower endpoints, e.g. "1,1/2,1/10".
        #[arg(long, value_delimiter = ',')]
        r_lowers: Option<Vec<Rational>>,
        /// Comma-separated two-sided levels.
        #[arg(long, value_delimiter = ',')]
        betas: Option<Vec<f64>>,
        /// Also write the raw supremum draws here as tidy CSV for
        /// histograms.
        #[arg(long)]
        dump_sups: Option<PathBuf>,
    },

    /// Monte Carlo coverage/length study over a DGP grid.
    Simulate {
        #[command(flatten)]
        cv: CvTableOpts,
        /// Comma-separated true tail indices.
        #[arg(long, default_value = "1.0", value_delimiter = ',')]
        xi0: Vec<f64>,
        /// Comma-separated deviation scales.
        #[arg(long, default_value = "0.0", value_delimiter = ',')]
        c0: Vec<f64>,
        /// Comma-separated sample sizes.
        #[arg(long, default_value = "500", value_delimiter = ',')]
        n: Vec<usize>,
        /// Replications per cell.
        #[arg(long, default_value_t = 5000)]
        n_reps: usize,
        /// Comma-separated subset of HN,HO,HS,IN,IO,IS.
        #[arg(long, default_value = "HN,HO,HS,IN,IO,IS", value_delimiter = ',')]
        methods: Vec<Method>,
        /// Tail probability of the quantile target.
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        /// Two-sided nominal level.
        #[arg(long, default_value_t = 0.05)]
        beta: f64,
        /// Snooping lower endpoint, e.g. "1/2".
        #[arg(long, default_value = "1/2", value_parser = input::parse_r_lower)]
        r_lower: f64,
    },
}

fn main() {
    // usage problems share the configuration exit code; --help and
    // --version stay successful
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() {
            errors::EXIT_CONFIG
        } else {
            0
        };
        let _ = e.print();
        std::process::exit(code);
    });
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = match &cli.command {
        Command::Estimate {
            input,
            selection,
            k,
            path_range,
        } => cmd_estimate(input, selection, *k, path_range.as_deref(), cli.format)?,
        Command::SelectK { input, selection } => cmd_select_k(input, selection, cli.format)?,
        Command::Ci {
            input,
            selection,
            budget,
            cv,
            k,
            beta,
            r_lower,
            z,
            methods,
        } => cmd_ci(
            input, selection, budget, cv, *k, *beta, *r_lower, *z, methods, cli.format,
        )?,
        Command::QuantileCi {
            input,
            selection,
            budget,
            cv,
            k,
            p,
            beta,
            r_lower,
            z,
            methods,
        } => cmd_quantile_ci(
            input, selection, budget, cv, *k, *p, *beta, *r_lower, *z, methods, cli.format,
        )?,
        Command::CvTable {
            n_sims,
            steps,
            r_lowers,
            betas,
            dump_sups,
        } => cmd_cv_table(
            *n_sims,
            *steps,
            r_lowers.clone(),
            betas.clone(),
            dump_sups.as_deref(),
            cli.seed,
            cli.output.as_deref(),
            cli.format,
        )?,
        Command::Simulate {
            cv,
            xi0,
            c0,
            n,
            n_reps,
            methods,
            p,
            beta,
            r_lower,
        } => cmd_simulate(
            cv, xi0, c0, n, *n_reps, methods, *p, *beta, *r_lower, cli.seed, cli.format,
        )?,
    };
    // cv-table writes its own file through --output
    if matches!(cli.command, Command::CvTable { .. }) {
        print_stdout(&out);
        return Ok(());
    }
    match &cli.output {
        Some(path) => std::fs::write(path, out).map_err(|e| CliError::Input {
            context: format!("cannot write '{}': {e}", path.display()),
        })?,
        None => print_stdout(&out),
    }
    Ok(())
}

/// Reports are often piped into `head`; a closed pipe ends the run
/// quietly instead of panicking.
fn print_stdout(s: &str) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_all(s.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(errors::EXIT_INPUT);
    }
}

struct LoadedSample {
    sample: Sample,
    scale: Option<f64>,
    cutoff: Option<f64>,
    dropped: Option<usize>,
}

fn load_sample(opts: &InputOpts) -> Result<LoadedSample, CliError> {
    let mut values = input::read_values(&opts.input, opts.column.as_deref())?;
    if let Some(scale) = opts.scale {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(CliError::Usage {
                context: format!("--scale must be positive and finite, got {scale}"),
            });
        }
        for v in &mut values {
            *v *= scale;
        }
    }
    let (sample, dropped) = match opts.cutoff {
        Some(cutoff) => {
            let t = left_tail_transform(&values, cutoff)?;
            (t.sample, Some(t.dropped))
        }
        None => (Sample::new(values)?, None),
    };
    Ok(LoadedSample {
        sample,
        scale: opts.scale,
        cutoff: opts.cutoff,
        dropped,
    })
}

fn resolve_k(
    sample: &Sample,
    explicit: Option<usize>,
    cfg: &SelectionConfig,
) -> Result<(usize, &'static str, Option<bool>), CliError> {
    match explicit {
        Some(k) => Ok((k, "explicit", None)),
        None => {
            let sel: Selection = select_k(sample, cfg)?;
            Ok((sel.k, "selected", Some(sel.fallback)))
        }
    }
}

fn load_cv_table(opts: &CvTableOpts) -> Result<CriticalValueTable, CliError> {
    if let Some(path) = &opts.cv_table {
        return Ok(CriticalValueTable::read_from_path(path)?);
    }
    if let Ok(path) = std::env::var(CV_TABLE_ENV) {
        if !path.is_empty() {
            return Ok(CriticalValueTable::read_from_path(Path::new(&path))?);
        }
    }
    Ok(builtin_table().clone())
}

/// Table lookups get an actionable hint pointing at the generator command.
fn lookup_q(table: &CriticalValueTable, r_lower: f64, beta: f64) -> Result<(f64, bool), CliError> {
    match table.lookup(r_lower, beta) {
        Ok(l) => Ok((l.q, l.interpolated)),
        Err(e) => Err(CliError::Usage {
            context: format!("{e}; generate a covering table with 'tailci cv-table'"),
        }),
    }
}

fn render<T: serde::Serialize>(value: &T, csv: String, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => csv,
    }
}

fn cmd_estimate(
    input: &InputOpts,
    selection: &SelectionOpts,
    k: Option<usize>,
    path_range: Option<&str>,
    format: Format,
) -> Result<String, CliError> {
    let loaded = load_sample(input)?;
    let (k, k_source, fallback) = resolve_k(&loaded.sample, k, &selection.config())?;
    let est = hill(&loaded.sample, k)?;
    let path = match path_range {
        Some(range) => {
            let (lo, hi) = range.split_once(':').ok_or_else(|| CliError::Usage {
                context: format!("--path-range expects K_LO:K_HI, got '{range}'"),
            })?;
            let parse = |s: &str| {
                s.trim().parse::<usize>().map_err(|_| CliError::Usage {
                    context: format!("--path-range expects integers, got '{range}'"),
                })
            };
            let estimates = hill_path(&loaded.sample, parse(lo)?, parse(hi)?)?;
            Some(
                estimates
                    .iter()
                    .map(|e| PathPoint {
                        k: e.k,
                        xi_hat: e.xi_hat,
                    })
                    .collect(),
            )
        }
        None => None,
    };
    let report = EstimateReport {
        n: loaded.sample.n(),
        k,
        k_source,
        fallback,
        xi_hat: est.xi_hat,
        scale: loaded.scale,
        cutoff: loaded.cutoff,
        dropped: loaded.dropped,
        hill_path: path,
    };
    let csv = report.to_csv();
    Ok(render(&report, csv, format))
}

fn cmd_select_k(
    input: &InputOpts,
    selection: &SelectionOpts,
    format: Format,
) -> Result<String, CliError> {
    let loaded = load_sample(input)?;
    let cfg = selection.config();
    let sel = select_k(&loaded.sample, &cfg)?;
    let trace = criterion_trace(&loaded.sample, &cfg)?
        .into_iter()
        .map(|(k, c)| TracePoint { k, c })
        .collect();
    let report = SelectKReport {
        n: loaded.sample.n(),
        k_hat: sel.k,
        fallback: sel.fallback,
        lower: sel.lower,
        upper: sel.upper,
        c_crit: cfg.c_crit,
        trace,
    };
    let csv = report.to_csv();
    Ok(render(&report, csv, format))
}

fn explicit_budget(budget: &BudgetOpts) -> Result<Option<BiasBudget>, CliError> {
    match (budget.a, budget.rho) {
        (Some(a), Some(rho)) => Ok(Some(BiasBudget::new(a, rho)?)),
        (None, None) => Ok(None),
        _ => Err(CliError::Usage {
            context: "an explicit budget needs both --A and --rho".into(),
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_ci(
    input: &InputOpts,
    selection: &SelectionOpts,
    budget: &BudgetOpts,
    cv: &CvTableOpts,
    k: Option<usize>,
    beta: f64,
    r_lower: f64,
    z: f64,
    methods: &[Method],
    format: Format,
) -> Result<String, CliError> {
    if let Some(bad) = methods.iter().find(|m| m.targets_quantile()) {
        return Err(CliError::Usage {
            context: format!("'ci' builds tail-index intervals; {bad} belongs to quantile-ci"),
        });
    }
    let loaded = load_sample(input)?;
    let (k_bar, k_source, fallback) = resolve_k(&loaded.sample, k, &selection.config())?;
    let table = load_cv_table(cv)?;
    let user_budget = explicit_budget(budget)?;

    let mut records = Vec::new();
    for method in methods {
        let record = match method {
            Method::Hn => {
                let iv = naive_ci_index(&loaded.sample, k_bar, z)?;
                IntervalRecord::new(&iv, z, None)
            }
            Method::Ho => {
                let (q, interpolated) = lookup_q(&table, 1.0, beta)?;
                let b = match user_budget {
                    Some(b) => b,
                    None => rule_of_thumb_budget(hill(&loaded.sample, k_bar)?.xi_hat, k_bar)?,
                };
                let iv = honest_ci_index(&loaded.sample, k_bar, q, &b)?;
                flagged(IntervalRecord::new(&iv, q, Some(&b)), interpolated)
            }
            Method::Hs => {
                let (q, interpolated) = lookup_q(&table, r_lower, beta)?;
                let iv = snooping_ci_index(&loaded.sample, k_bar, r_lower, q)?;
                flagged(IntervalRecord::new(&iv, q, None), interpolated)
            }
            other => unreachable!("quantile methods rejected above: {other}"),
        };
        records.push(finish_record(record, fallback, loaded.cutoff.is_some()));
    }
    let report = CiReport {
        n: loaded.sample.n(),
        k: k_bar,
        k_source,
        fallback,
        cutoff: loaded.cutoff,
        dropped: loaded.dropped,
        beta,
        intervals: records,
    };
    let csv = report.to_csv();
    Ok(render(&report, csv, format))
}

#[allow(clippy::too_many_arguments)]
fn cmd_quantile_ci(
    input: &InputOpts,
    selection: &SelectionOpts,
    budget: &BudgetOpts,
    cv: &CvTableOpts,
    k: Option<usize>,
    p: f64,
    beta: f64,
    r_lower: f64,
    z: f64,
    methods: &[Method],
    format: Format,
) -> Result<String, CliError> {
    if let Some(bad) = methods.iter().find(|m| !m.targets_quantile()) {
        return Err(CliError::Usage {
            context: format!("'quantile-ci' builds quantile intervals; {bad} belongs to ci"),
        });
    }
    let loaded = load_sample(input)?;
    let (k_bar, k_source, fallback) = resolve_k(&loaded.sample, k, &selection.config())?;
    let table = load_cv_table(cv)?;
    let user_budget = explicit_budget(budget)?;

    let mut records = Vec::new();
    for method in methods {
        let (mut interval, q_used, budget_used, interpolated) = match method {
            Method::In => (
                naive_ci_quantile(&loaded.sample, k_bar, p, z)?,
                z,
                None,
                false,
            ),
            Method::Io => {
                let (q, interpolated) = lookup_q(&table, 1.0, beta)?;
                let b = match user_budget {
                    Some(b) => b,
                    None => rule_of_thumb_budget(hill(&loaded.sample, k_bar)?.xi_hat, k_bar)?,
                };
                (
                    honest_ci_quantile(&loaded.sample, k_bar, p, q, &b)?,
                    q,
                    Some(b),
                    interpolated,
                )
            }
            Method::Is => {
                let (q, interpolated) = lookup_q(&table, r_lower, beta)?;
                (
                    snooping_ci_quantile(&loaded.sample, k_bar, r_lower, p, q)?,
                    q,
                    None,
                    interpolated,
                )
            }
            other => unreachable!("index methods rejected above: {other}"),
        };
        let mut restored = false;
        if let Some(cutoff) = loaded.cutoff {
            if !interval.empty {
                interval = restore_left_tail_interval(&interval, cutoff, 0.0)?;
            }
            restored = true;
        }
        let mut record = IntervalRecord::new(&interval, q_used, budget_used.as_ref());
        record = flagged(record, interpolated);
        if restored {
            record.flags.push("left_tail_restored".to_string());
        }
        records.push(finish_record(record, fallback, false));
    }
    let report = CiReport {
        n: loaded.sample.n(),
        k: k_bar,
        k_source,
        fallback,
        cutoff: loaded.cutoff,
        dropped: loaded.dropped,
        beta,
        intervals: records,
    };
    let csv = report.to_csv();
    Ok(render(&report, csv, format))
}

fn flagged(mut record: IntervalRecord, interpolated: bool) -> IntervalRecord {
    if interpolated {
        record.flags.push("interpolated_q".to_string());
    }
    record
}

fn finish_record(
    mut record: IntervalRecord,
    fallback: Option<bool>,
    left_tail_input: bool,
) -> IntervalRecord {
    if fallback == Some(true) {
        record.flags.push("fallback_k".to_string());
    }
    if left_tail_input {
        record.flags.push("left_tail".to_string());
    }
    record
}

#[allow(clippy::too_many_arguments)]
fn cmd_cv_table(
    n_sims: usize,
    steps: usize,
    r_lowers: Option<Vec<Rational>>,
    betas: Option<Vec<f64>>,
    dump_sups: Option<&Path>,
    seed: u64,
    output: Option<&Path>,
    format: Format,
) -> Result<String, CliError> {
    let r_lowers = r_lowers.unwrap_or_else(|| tailci::DEFAULT_R_LOWERS.to_vec());
    let betas = betas.unwrap_or_else(|| tailci::DEFAULT_BETAS.to_vec());
    let draws = simulate_sup_draws(&r_lowers, n_sims, steps, seed)?;
    if let Some(path) = dump_sups {
        std::fs::write(path, draws.to_csv()).map_err(|e| CliError::Input {
            context: format!("cannot write '{}': {e}", path.display()),
        })?;
    }
    let table = CriticalValueTable::from_draws(&draws, &betas)?;
    match output {
        Some(path) => {
            table.write_to_path(path)?;
            let report = CvTableReport {
                n_sims,
                n_steps: steps,
                seed,
                entries: table.entries.len(),
                written_to: Some(path.display().to_string()),
            };
            Ok(render(&report, table_summary_csv(&report), format))
        }
        // no output path: the table text itself is the payload
        None => Ok(table.serialize_to_string()),
    }
}

fn table_summary_csv(report: &CvTableReport) -> String {
    format!(
        "n_sims,n_steps,seed,entries,written_to\n{},{},{},{},{}\n",
        report.n_sims,
        report.n_steps,
        report.seed,
        report.entries,
        report.written_to.as_deref().unwrap_or("")
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cv: &CvTableOpts,
    xi0: &[f64],
    c0: &[f64],
    n: &[usize],
    n_reps: usize,
    methods: &[Method],
    p: f64,
    beta: f64,
    r_lower: f64,
    seed: u64,
    format: Format,
) -> Result<String, CliError> {
    let table = load_cv_table(cv)?;
    let mut cells = Vec::new();
    for xi in xi0 {
        for c in c0 {
            let dgp = DgpConfig::new(*xi, *c)?;
            for size in n {
                cells.push(StudyCell { dgp, n: *size });
            }
        }
    }
    let params = StudyParams {
        methods: methods.to_vec(),
        n_reps,
        p,
        beta,
        snoop_r_lower: r_lower,
        z_naive: 1.96,
        selection: SelectionConfig::default(),
        master_seed: seed,
    };
    let result = match run_study(&cells, &params, &table) {
        Err(tailci::Error::MissingEntry { r_lower, beta }) => {
            return Err(CliError::Usage {
                context: format!(
                    "no critical value tabulated for r_lower = {r_lower}, beta = {beta}; \
                     generate a covering table with 'tailci cv-table'"
                ),
            })
        }
        other => other?,
    };
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&result).expect("study serializes");
            s.push('\n');
            s
        }
        Format::Csv => result.to_csv(),
    })
}
