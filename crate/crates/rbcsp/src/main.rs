//! Command-line surface: generate instances, analyze them, run searches and
//! sweeps, and plot the results.
//!
//! Exit codes are a stable contract: 0 success, 2 usage error, 3 budget
//! exhaustion, 4 i/o or file-format error. Errors print one machine-parsable
//! line `error kind=<kind> msg="..."` on stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rbcsp::consistency::{instance_consistent, width_certificate, EnumBudget};
use rbcsp::error::Error;
use rbcsp::experiments::{
    bf_threshold, crossing_point, run_sweep, sat_threshold, threshold_caveat, BaseParams, Statistic,
    SweepSpec, SweepTable, TrialBudget,
};
use rbcsp::hypergraph::{compute_width, find_core, Hypergraph};
use rbcsp::model::{generate, GenParams, Instance, Model};
use rbcsp::plot::{line_chart, ChartConfig};
use rbcsp::search::{backtrack_solve, exact_backtrack_free, greedy_run, SolveStatus, ValueRule};

#[derive(Parser)]
#[command(name = "rbcsp", version, about = "Random CSP laboratory: generation, width, search, and threshold sweeps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Generation parameters, shared by `gen` and the generate-inline mode of
/// the analysis subcommands.
#[derive(Args, Clone)]
struct GenOpts {
    /// Variable count.
    #[arg(long)]
    n: Option<usize>,
    /// Constraint arity.
    #[arg(long)]
    k: Option<usize>,
    /// Domain exponent (domain size d = round(n^alpha)).
    #[arg(long)]
    alpha: Option<f64>,
    /// Tightness in (0,1).
    #[arg(long)]
    p: Option<f64>,
    /// Density (constraint count m = round(r n ln n)).
    #[arg(long)]
    r: Option<f64>,
    /// rb or rd.
    #[arg(long)]
    model: Option<Model>,
    /// Generator seed; all randomness flows from here.
    #[arg(long)]
    seed: Option<u64>,
}

impl GenOpts {
    fn params(&self) -> Result<GenParams, Error> {
        let missing = |what: &str| Error::invalid(format!("--{what} is required"));
        Ok(GenParams {
            n: self.n.ok_or_else(|| missing("n"))?,
            k: self.k.ok_or_else(|| missing("k"))?,
            alpha: self.alpha.ok_or_else(|| missing("alpha"))?,
            p: self.p.ok_or_else(|| missing("p"))?,
            r: self.r.ok_or_else(|| missing("r"))?,
            model: self.model.ok_or_else(|| missing("model"))?,
            seed: self.seed.ok_or_else(|| missing("seed"))?,
        })
    }
}

#[derive(Args, Clone)]
struct InputOpts {
    /// Instance file; omit it to generate inline from the --n/--k/... flags.
    #[arg(short = 'i', long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    gen: GenOpts,
}

impl InputOpts {
    fn load(&self) -> Result<Instance, Error> {
        match &self.input {
            Some(path) => Instance::from_text(&std::fs::read_to_string(path)?),
            None => generate(&self.gen.params()?),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance and write it to a file.
    Gen {
        #[command(flatten)]
        gen: GenOpts,
        /// Output path for the instance file.
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Run the backtracking solver under the width-optimal ordering.
    Solve {
        #[command(flatten)]
        input: InputOpts,
        /// Node budget for the solver.
        #[arg(long, default_value_t = rbcsp::search::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Print the witness assignment on satisfiable instances.
        #[arg(long)]
        witness: bool,
    },
    /// Run one greedy pass under the width-optimal ordering.
    Greedy {
        #[command(flatten)]
        input: InputOpts,
        /// lex for smallest-value-first, random for a seeded shuffle.
        #[arg(long, default_value = "lex")]
        rule: String,
        /// Seed of the random value rule.
        #[arg(long)]
        value_seed: Option<u64>,
    },
    /// Compute the hypergraph width and its optimal ordering.
    Width {
        #[command(flatten)]
        input: InputOpts,
        /// Print the full variable ordering.
        #[arg(long)]
        ordering: bool,
        /// Also write the constraint hypergraph to this file.
        #[arg(long)]
        dump_hg: Option<PathBuf>,
    },
    /// Find the maximal subgraph of minimum degree >= the given bound.
    Core {
        #[command(flatten)]
        input: InputOpts,
        /// Degree bound of the core.
        #[arg(short = 'm', long)]
        min_degree: usize,
        /// Print the member nodes.
        #[arg(long)]
        nodes: bool,
    },
    /// Decide backtrack-freeness under the width-optimal ordering, exactly
    /// and via the consistency certificate.
    Bfcheck {
        #[command(flatten)]
        input: InputOpts,
        /// Probe budget for the exact check and the certificate.
        #[arg(long, default_value_t = rbcsp::search::DEFAULT_ENUM_BUDGET)]
        budget: u64,
    },
    /// Check variable-centered consistency at a given critical size.
    Consistency {
        #[command(flatten)]
        input: InputOpts,
        /// Critical size t.
        #[arg(short = 't', long)]
        t: usize,
        /// Probe budget.
        #[arg(long, default_value_t = rbcsp::search::DEFAULT_ENUM_BUDGET)]
        budget: u64,
    },
    /// Run a Monte Carlo sweep over the density grid and write a CSV.
    Sweep {
        #[command(flatten)]
        base: GenOpts,
        /// Statistic: sat, greedy, certificate, width, or maxdeg.
        #[arg(long)]
        statistic: Statistic,
        /// Smallest density of the grid.
        #[arg(long)]
        r_min: f64,
        /// Largest density of the grid.
        #[arg(long)]
        r_max: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Trials per grid point.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Solver node budget per trial.
        #[arg(long, default_value_t = 10_000_000)]
        budget_nodes: u64,
        /// Enumeration probe budget per trial.
        #[arg(long, default_value_t = 10_000_000)]
        budget_work: u64,
        /// Worker threads; defaults to all cores. The output is identical
        /// for any value.
        #[arg(long)]
        jobs: Option<usize>,
        /// Output CSV path; metadata goes to `<path>.meta.json`.
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Render a sweep CSV as an SVG line chart with the theoretical
    /// threshold as a vertical rule.
    Plot {
        /// Sweep CSV (its `.meta.json` sidecar supplies the parameters).
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Override the threshold position.
        #[arg(long)]
        threshold: Option<f64>,
        /// Draw no threshold rule.
        #[arg(long)]
        no_threshold: bool,
        /// Output SVG path.
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = match &e {
                Error::InvalidParams(_) => ("usage", 2),
                Error::BudgetExhausted(_) => ("budget", 3),
                Error::Parse(_) | Error::Io(_) => ("io", 4),
            };
            eprintln!("error kind={kind} msg=\"{e}\"");
            ExitCode::from(code)
        }
    }
}

fn params_record(params: &GenParams, d: usize, m: usize) -> String {
    format!(
        "version={} n={} k={} d={} m={} model={} alpha={} p={} r={} seed={}",
        rbcsp::VERSION,
        params.n,
        params.k,
        d,
        m,
        params.model,
        params.alpha,
        params.p,
        params.r,
        params.seed
    )
}

fn instance_record(inst: &Instance) -> String {
    params_record(&inst.params, inst.d, inst.constraints.len())
}

fn width_ordering(inst: &Instance) -> (usize, rbcsp::hypergraph::VariableOrdering) {
    compute_width(&Hypergraph::from_instance(inst))
}

fn warn_caveat(alpha: f64, p: f64, k: usize) {
    if let Some(msg) = threshold_caveat(alpha, p, k) {
        log::warn!("{msg}");
    }
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Gen { gen, out } => {
            let params = gen.params()?;
            warn_caveat(params.alpha, params.p, params.k);
            let inst = generate(&params)?;
            std::fs::write(&out, inst.to_text())?;
            println!("cmd=gen {} file={}", instance_record(&inst), out.display());
        }
        Cmd::Solve { input, budget, witness } => {
            let inst = input.load()?;
            let (width, order) = width_ordering(&inst);
            let res = backtrack_solve(&inst, &order, budget)?;
            let mut line = format!(
                "cmd=solve {} order=width width={} status={} dead_ends={} nodes_visited={} budget={}",
                instance_record(&inst),
                width,
                match res.status {
                    SolveStatus::Sat => "sat",
                    SolveStatus::Unsat => "unsat",
                },
                res.dead_ends,
                res.nodes_visited,
                budget
            );
            if witness {
                if let Some(a) = &res.witness {
                    let vals: Vec<String> = (0..inst.n()).map(|v| a.get(v).unwrap().to_string()).collect();
                    write!(line, " witness={}", vals.join(",")).unwrap();
                }
            }
            println!("{line}");
        }
        Cmd::Greedy { input, rule, value_seed } => {
            let inst = input.load()?;
            let (width, order) = width_ordering(&inst);
            let rule = match rule.as_str() {
                "lex" => ValueRule::LexMin,
                "random" => ValueRule::SeededRandom(
                    value_seed.ok_or_else(|| Error::invalid("--value-seed is required with --rule random"))?,
                ),
                other => return Err(Error::invalid(format!("unknown rule `{other}` (expected lex or random)"))),
            };
            let out = greedy_run(&inst, &order, rule);
            println!(
                "cmd=greedy {} order=width width={} success={} steps={} stuck_at={}",
                instance_record(&inst),
                width,
                out.success,
                out.steps,
                out.stuck_at.map_or("none".to_string(), |v| v.to_string())
            );
        }
        Cmd::Width { input, ordering, dump_hg } => {
            let inst = input.load()?;
            let hg = Hypergraph::from_instance(&inst);
            let (width, order) = compute_width(&hg);
            if let Some(path) = dump_hg {
                std::fs::write(&path, hg.to_text())?;
            }
            let mut line = format!(
                "cmd=width {} width={} max_degree={}",
                instance_record(&inst),
                width,
                hg.max_degree()
            );
            if ordering {
                let perm: Vec<String> = order.perm().iter().map(|v| v.to_string()).collect();
                write!(line, " ordering={}", perm.join(",")).unwrap();
            }
            println!("{line}");
        }
        Cmd::Core { input, min_degree, nodes } => {
            let inst = input.load()?;
            let hg = Hypergraph::from_instance(&inst);
            let core = find_core(&hg, min_degree)?;
            let mut line = format!(
                "cmd=core {} min_degree={} empty={} size={} edges={}",
                instance_record(&inst),
                min_degree,
                core.is_empty(),
                core.nodes.len(),
                core.surviving_edges.len()
            );
            if nodes {
                let ns: Vec<String> = core.nodes.iter().map(|v| v.to_string()).collect();
                write!(line, " nodes={}", ns.join(",")).unwrap();
            }
            println!("{line}");
        }
        Cmd::Bfcheck { input, budget } => {
            let inst = input.load()?;
            let (width, order) = width_ordering(&inst);
            let enum_budget = EnumBudget { max_work: budget, ..EnumBudget::default() };
            let certificate = width_certificate(&inst, &order, &enum_budget)?;
            let exact = exact_backtrack_free(&inst, &order, budget)?;
            println!(
                "cmd=bfcheck {} order=width width={} certificate={} exact={}",
                instance_record(&inst),
                width,
                certificate,
                exact
            );
        }
        Cmd::Consistency { input, t, budget } => {
            let inst = input.load()?;
            let enum_budget = EnumBudget { max_work: budget, ..EnumBudget::default() };
            let consistent = instance_consistent(&inst, t, &enum_budget)?;
            println!("cmd=consistency {} t={} consistent={}", instance_record(&inst), t, consistent);
        }
        Cmd::Sweep {
            base,
            statistic,
            r_min,
            r_max,
            points,
            trials,
            budget_nodes,
            budget_work,
            jobs,
            out,
        } => {
            let missing = |what: &str| Error::invalid(format!("--{what} is required"));
            if base.r.is_some() {
                return Err(Error::invalid("sweep takes --r-min/--r-max, not --r".to_string()));
            }
            let master_seed = base.seed.ok_or_else(|| missing("seed"))?;
            let base = BaseParams {
                n: base.n.ok_or_else(|| missing("n"))?,
                k: base.k.ok_or_else(|| missing("k"))?,
                alpha: base.alpha.ok_or_else(|| missing("alpha"))?,
                p: base.p.ok_or_else(|| missing("p"))?,
                model: base.model.ok_or_else(|| missing("model"))?,
            };
            warn_caveat(base.alpha, base.p, base.k);
            if points < 1 {
                return Err(Error::invalid("--points must be at least 1".to_string()));
            }
            let r_grid: Vec<f64> = if points == 1 {
                vec![r_min]
            } else {
                (0..points).map(|i| r_min + (r_max - r_min) * i as f64 / (points - 1) as f64).collect()
            };
            let spec = SweepSpec {
                base,
                r_grid,
                trials,
                master_seed,
                statistic,
                budget: TrialBudget { solver_nodes: budget_nodes, enum_work: budget_work },
            };
            let table = match jobs {
                Some(j) => rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build()
                    .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
                    .install(|| run_sweep(&spec))?,
                None => run_sweep(&spec)?,
            };
            std::fs::write(&out, table.to_csv())?;
            let meta_path = sidecar_path(&out);
            std::fs::write(&meta_path, table.metadata_json())?;
            let crossing = crossing_point(&table, 0.5).ok().flatten();
            println!(
                "cmd=sweep version={} statistic={} rows={} trials={} crossing_at_half={} file={} meta={}",
                rbcsp::VERSION,
                statistic.name(),
                table.rows.len(),
                trials,
                crossing.map_or("none".to_string(), |c| c.to_string()),
                out.display(),
                meta_path.display()
            );
        }
        Cmd::Plot { input, threshold, no_threshold, out } => {
            let csv = std::fs::read_to_string(&input)?;
            let rows = SweepTable::rows_from_csv(&csv)?;
            let meta: Option<serde_json::Value> = std::fs::read_to_string(sidecar_path(&input))
                .ok()
                .and_then(|s| serde_json::from_str(&s).ok());
            let spec_of = |m: &serde_json::Value| m.get("spec").cloned();
            let spec: Option<SweepSpec> =
                meta.as_ref().and_then(spec_of).and_then(|v| serde_json::from_value(v).ok());
            let statistic = spec.as_ref().map(|s| s.statistic);
            let rule = if no_threshold {
                None
            } else if threshold.is_some() {
                threshold
            } else {
                match (statistic, &spec) {
                    (Some(Statistic::SatProbability), Some(s)) => {
                        Some(sat_threshold(s.base.alpha, s.base.p)?)
                    }
                    (Some(Statistic::GreedySuccess | Statistic::CertificateRate), Some(s)) => {
                        Some(bf_threshold(s.base.alpha, s.base.p, s.base.k)?)
                    }
                    _ => None,
                }
            };
            let metadata = match &spec {
                Some(s) => format!(
                    "rbcsp v{} statistic={} n={} k={} alpha={} p={} model={} trials={} master_seed={}",
                    rbcsp::VERSION,
                    s.statistic.name(),
                    s.base.n,
                    s.base.k,
                    s.base.alpha,
                    s.base.p,
                    s.base.model,
                    s.trials,
                    s.master_seed
                ),
                None => format!("rbcsp v{}", rbcsp::VERSION),
            };
            let cfg = ChartConfig {
                title: match statistic {
                    Some(s) => format!("{} vs density", s.name()),
                    None => "sweep".to_string(),
                },
                x_label: "r".to_string(),
                y_label: statistic.map_or("value".to_string(), |s| s.name().to_string()),
                threshold: rule,
                metadata,
            };
            let points: Vec<(f64, f64)> = rows.iter().map(|row| (row.r, row.value)).collect();
            std::fs::write(&out, line_chart(&points, &cfg))?;
            println!(
                "cmd=plot version={} points={} threshold={} file={}",
                rbcsp::VERSION,
                points.len(),
                rule.map_or("none".to_string(), |t| t.to_string()),
                out.display()
            );
        }
    }
    Ok(())
}

fn sidecar_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    csv.with_file_name(name)
}
