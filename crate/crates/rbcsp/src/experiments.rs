//! Threshold formulas and Monte Carlo sweeps over the density parameter.
//!
//! The two closed-form thresholds are `sat_threshold = -alpha / ln(1-p)` for
//! satisfiability and `bf_threshold = -alpha / (k ln(1-p))` for
//! backtrack-freeness; the second is the first divided by `k`. A sweep walks
//! an ascending grid of densities, runs independent seeded trials at each
//! grid point, and reports a statistic per point. Trials that exhaust their
//! budget are counted separately and excluded from the statistic, never
//! folded into success or failure.
//!
//! Trial seeds are derived as `hash(master_seed, grid index, trial index)`,
//! so grid points are independent, trials can run on any number of threads,
//! and the resulting table is byte-identical either way.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{compute_width, Hypergraph};
use crate::model::{generate, GenParams, Model};
use crate::rng::{derive_seed, tag};
use crate::search::{backtrack_solve, greedy_run, SolveStatus, ValueRule};
use crate::consistency::{width_certificate, EnumBudget};

/// Exact satisfiability threshold in the density parameter.
pub fn sat_threshold(alpha: f64, p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 0.0 || p >= 1.0 {
        return Err(Error::invalid(format!("p = {p} must lie in (0, 1)")));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::invalid(format!("alpha = {alpha} must be positive")));
    }
    Ok(-alpha / (1.0 - p).ln())
}

/// Exact backtrack-freeness threshold: [`sat_threshold`] divided by `k`.
pub fn bf_threshold(alpha: f64, p: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::invalid(format!("k = {k} must be at least 2")));
    }
    Ok(sat_threshold(alpha, p)? / k as f64)
}

/// Why the sharp-threshold regime does not cover these parameters, if it
/// does not. The formulas still evaluate; callers surface this as a warning.
pub fn threshold_caveat(alpha: f64, p: f64, k: usize) -> Option<String> {
    let mut reasons = Vec::new();
    if alpha <= 1.0 / k as f64 {
        reasons.push(format!("alpha = {alpha} is not above 1/k = {}", 1.0 / k as f64));
    }
    if (k as f64) < 1.0 / (1.0 - p) {
        reasons.push(format!("k = {k} is below 1/(1-p) = {}", 1.0 / (1.0 - p)));
    }
    if reasons.is_empty() {
        None
    } else {
        Some(format!("sharp-threshold regime not guaranteed: {}", reasons.join("; ")))
    }
}

/// Expected width of the constraint hypergraph: `k * r * ln n`.
pub fn predicted_width(n: f64, k: usize, r: f64) -> f64 {
    k as f64 * r * n.ln()
}

/// High-probability bound on the maximum degree:
/// `(1 + sqrt(6/(k r))) * k * r * ln n`.
pub fn predicted_max_degree(n: f64, k: usize, r: f64) -> f64 {
    (1.0 + (6.0 / (k as f64 * r)).sqrt()) * predicted_width(n, k, r)
}

/// What a sweep measures per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistic {
    /// Fraction of instances the backtracking solver proves satisfiable.
    SatProbability,
    /// Fraction of greedy runs (width-optimal ordering, seeded random value
    /// rule) that assign every variable.
    GreedySuccess,
    /// Fraction of instances whose width-consistency certificate holds under
    /// the width-optimal ordering.
    CertificateRate,
    /// Hypergraph width divided by `k * r * ln n`.
    WidthRatio,
    /// Maximum degree divided by `k * r * ln n`.
    MaxDegreeRatio,
}

impl Statistic {
    pub fn is_probability(&self) -> bool {
        matches!(self, Statistic::SatProbability | Statistic::GreedySuccess | Statistic::CertificateRate)
    }

    /// Short name used on the CLI and in metadata.
    pub fn name(&self) -> &'static str {
        match self {
            Statistic::SatProbability => "sat",
            Statistic::GreedySuccess => "greedy",
            Statistic::CertificateRate => "certificate",
            Statistic::WidthRatio => "width",
            Statistic::MaxDegreeRatio => "maxdeg",
        }
    }
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sat" => Ok(Statistic::SatProbability),
            "greedy" => Ok(Statistic::GreedySuccess),
            "certificate" => Ok(Statistic::CertificateRate),
            "width" => Ok(Statistic::WidthRatio),
            "maxdeg" => Ok(Statistic::MaxDegreeRatio),
            other => Err(Error::invalid(format!(
                "unknown statistic `{other}` (expected sat, greedy, certificate, width, or maxdeg)"
            ))),
        }
    }
}

/// Generator parameters shared by every grid point (density and seed vary).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseParams {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub p: f64,
    pub model: Model,
}

impl BaseParams {
    pub fn with(&self, r: f64, seed: u64) -> GenParams {
        GenParams { n: self.n, k: self.k, alpha: self.alpha, p: self.p, r, model: self.model, seed }
    }
}

/// Per-trial caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialBudget {
    /// Node cap for the backtracking solver.
    pub solver_nodes: u64,
    /// Probe cap for certificate enumeration.
    pub enum_work: u64,
}

impl Default for TrialBudget {
    fn default() -> Self {
        TrialBudget { solver_nodes: 10_000_000, enum_work: 10_000_000 }
    }
}

/// A full sweep description; the table it produces is a pure function of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: BaseParams,
    /// Strictly increasing density grid.
    pub r_grid: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub statistic: Statistic,
    pub budget: TrialBudget,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.r_grid.is_empty() {
            return Err(Error::invalid("empty density grid".to_string()));
        }
        if !self.r_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("density grid must be strictly increasing".to_string()));
        }
        if self.r_grid.iter().any(|&r| !r.is_finite() || r <= 0.0) {
            return Err(Error::invalid("densities must be positive".to_string()));
        }
        if self.trials == 0 {
            return Err(Error::invalid("at least one trial per grid point".to_string()));
        }
        self.base.with(self.r_grid[0], 0).validate()
    }
}

/// One grid point of a sweep result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: f64,
    /// Mean statistic over the trials that finished within budget; NaN when
    /// none did.
    pub value: f64,
    pub trials: usize,
    pub budget_failures: usize,
    /// Binomial standard error for probability statistics, sample standard
    /// error otherwise.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

enum TrialOutcome {
    Value(f64),
    BudgetExceeded,
}

fn run_trial(spec: &SweepSpec, r: f64, seed: u64) -> Result<TrialOutcome> {
    let params = spec.base.with(r, seed);
    let norm = predicted_width(params.n as f64, params.k, r);
    match spec.statistic {
        Statistic::WidthRatio => {
            // Scopes only: relations play no role in the hypergraph
            // statistics and would not fit in memory at large n.
            let hg = Hypergraph::generate(&params)?;
            let (width, _) = compute_width(&hg);
            Ok(TrialOutcome::Value(width as f64 / norm))
        }
        Statistic::MaxDegreeRatio => {
            let hg = Hypergraph::generate(&params)?;
            Ok(TrialOutcome::Value(hg.max_degree() as f64 / norm))
        }
        Statistic::SatProbability => {
            let inst = generate(&params)?;
            let (_, order) = compute_width(&Hypergraph::from_instance(&inst));
            match backtrack_solve(&inst, &order, spec.budget.solver_nodes) {
                Ok(res) => Ok(TrialOutcome::Value((res.status == SolveStatus::Sat) as u8 as f64)),
                Err(e) if e.is_budget() => Ok(TrialOutcome::BudgetExceeded),
                Err(e) => Err(e),
            }
        }
        Statistic::GreedySuccess => {
            let inst = generate(&params)?;
            let (_, order) = compute_width(&Hypergraph::from_instance(&inst));
            let rule = ValueRule::SeededRandom(derive_seed(seed, &[tag::VALUE_RULE]));
            let out = greedy_run(&inst, &order, rule);
            Ok(TrialOutcome::Value(out.success as u8 as f64))
        }
        Statistic::CertificateRate => {
            let inst = generate(&params)?;
            let (_, order) = compute_width(&Hypergraph::from_instance(&inst));
            let budget = EnumBudget { max_work: spec.budget.enum_work, ..EnumBudget::default() };
            match width_certificate(&inst, &order, &budget) {
                Ok(ok) => Ok(TrialOutcome::Value(ok as u8 as f64)),
                Err(e) if e.is_budget() => Ok(TrialOutcome::BudgetExceeded),
                Err(e) => Err(e),
            }
        }
    }
}

/// Run the sweep. Trials execute in parallel; the table is identical to a
/// sequential run because seeds are derived per (grid point, trial) and the
/// reduction is ordered.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let jobs: Vec<(usize, usize)> = (0..spec.r_grid.len())
        .flat_map(|ri| (0..spec.trials).map(move |t| (ri, t)))
        .collect();
    let outcomes: Vec<Result<TrialOutcome>> = jobs
        .par_iter()
        .map(|&(ri, t)| {
            let seed = derive_seed(spec.master_seed, &[tag::TRIAL, ri as u64, t as u64]);
            run_trial(spec, spec.r_grid[ri], seed)
        })
        .collect();

    let mut rows = Vec::with_capacity(spec.r_grid.len());
    let mut it = outcomes.into_iter();
    for &r in &spec.r_grid {
        let mut values = Vec::with_capacity(spec.trials);
        let mut budget_failures = 0usize;
        for _ in 0..spec.trials {
            match it.next().expect("one outcome per job")? {
                TrialOutcome::Value(v) => values.push(v),
                TrialOutcome::BudgetExceeded => budget_failures += 1,
            }
        }
        let completed = values.len();
        let value = if completed == 0 { f64::NAN } else { values.iter().sum::<f64>() / completed as f64 };
        let stderr = if completed == 0 {
            f64::NAN
        } else if spec.statistic.is_probability() {
            (value * (1.0 - value) / completed as f64).sqrt()
        } else if completed < 2 {
            0.0
        } else {
            let mean = value;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (completed - 1) as f64;
            (var / completed as f64).sqrt()
        };
        rows.push(SweepRow { r, value, trials: spec.trials, budget_failures, stderr });
    }
    Ok(SweepTable { spec: spec.clone(), rows })
}

/// Smallest density where consecutive rows bracket `level`, by linear
/// interpolation. `None` when the table never crosses it.
pub fn crossing_point(table: &SweepTable, level: f64) -> Result<Option<f64>> {
    if !level.is_finite() || level <= 0.0 || level >= 1.0 {
        return Err(Error::invalid(format!("level = {level} must lie in (0, 1)")));
    }
    let rows: Vec<&SweepRow> = table.rows.iter().filter(|r| r.value.is_finite()).collect();
    if rows.len() < 2 {
        return Err(Error::invalid("crossing needs at least two rows with finite values".to_string()));
    }
    for pair in rows.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if a.value == level {
            return Ok(Some(a.r));
        }
        if (a.value - level) * (b.value - level) < 0.0 {
            let t = (level - a.value) / (b.value - a.value);
            return Ok(Some(a.r + t * (b.r - a.r)));
        }
    }
    if rows.last().unwrap().value == level {
        return Ok(Some(rows.last().unwrap().r));
    }
    Ok(None)
}

/// Least-squares slope of value against density; `None` with fewer than two
/// finite rows.
pub fn trend_slope(table: &SweepTable) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        table.rows.iter().filter(|r| r.value.is_finite()).map(|r| (r.r, r.value)).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "nan".to_string()
    }
}

impl SweepTable {
    /// CSV body: `r,value,trials,budget_failures,stderr`, LF line endings,
    /// `.` decimal separator.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,value,trials,budget_failures,stderr\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(row.r),
                fmt_f64(row.value),
                row.trials,
                row.budget_failures,
                fmt_f64(row.stderr)
            ));
        }
        out
    }

    /// Sidecar metadata: the full spec plus the artifact version, as JSON.
    pub fn metadata_json(&self) -> String {
        #[derive(Serialize)]
        struct Meta<'a> {
            version: &'static str,
            spec: &'a SweepSpec,
        }
        let mut s = serde_json::to_string_pretty(&Meta { version: crate::VERSION, spec: &self.spec })
            .expect("spec serializes");
        s.push('\n');
        s
    }

    /// Parse a CSV produced by [`SweepTable::to_csv`] into bare rows.
    pub fn rows_from_csv(text: &str) -> Result<Vec<SweepRow>> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("empty sweep file".to_string()))?;
        if header.trim() != "r,value,trials,budget_failures,stderr" {
            return Err(Error::parse(format!("unexpected sweep header `{header}`")));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::parse(format!("row {} has {} fields, expected 5", i + 2, fields.len())));
            }
            let f = |s: &str| -> Result<f64> {
                if s == "nan" {
                    Ok(f64::NAN)
                } else {
                    s.parse().map_err(|_| Error::parse(format!("bad number `{s}`")))
                }
            };
            rows.push(SweepRow {
                r: f(fields[0])?,
                value: f(fields[1])?,
                trials: fields[2].parse().map_err(|_| Error::parse(format!("bad count `{}`", fields[2])))?,
                budget_failures: fields[3]
                    .parse()
                    .map_err(|_| Error::parse(format!("bad count `{}`", fields[3])))?,
                stderr: f(fields[4])?,
            });
        }
        Ok(rows)
    }
}
