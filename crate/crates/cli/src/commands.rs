use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use uncertainty_core::critical::{
    battery_passes, eigenstate_case, find_uncorrelated_state, verify_uncorrelated_consequences, CheckResult,
    CheckStatus, EigenstateCase, UncorrelatedOutcome, UncorrelatedSearch, Which,
};
use uncertainty_core::problem::ProblemFile;
use uncertainty_core::relations::evaluate_all;
use uncertainty_core::search::{
    extremize as run_extremize, fuzz_campaign, sample_gue_observable, sample_haar_state, CampaignSummary, Direction,
    ExtremizeRequest, ExtremizeResult, FuzzCampaign, SampleConfig,
};
use uncertainty_core::{Execution, RelationId, RelationReport};

use crate::input::{Inputs, Resolver, Tolerances};
use crate::render::{self, flag, num, opt_num, Format};
use crate::Failure;

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, text: &str) -> Result<(), Failure> {
        render::emit(text, self.out.as_deref())
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn parse_relation(s: &str) -> Result<RelationId, String> {
    s.parse().map_err(|e: uncertainty_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_name = "LABEL")]
    state: String,
    #[command(flatten)]
    tolerances: Tolerances,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
struct ReportOutput<'a> {
    dim: usize,
    a: &'a str,
    b: &'a str,
    state: &'a str,
    violations: usize,
    reports: Vec<RelationReport>,
}

pub fn report(args: &ReportArgs) -> Result<u8, Failure> {
    let opts = args.tolerances.options()?;
    let resolver = Resolver::new(&args.inputs)?;
    let (a, b) = resolver.pair(&args.inputs)?;
    let phi = resolver.state(&args.state)?;
    if phi.dim() != a.dim() {
        return Err(Failure::input(format!(
            "dimension mismatch: state `{}` is {}-dimensional, observables are {}-dimensional",
            args.state,
            phi.dim(),
            a.dim()
        )));
    }
    let reports = evaluate_all(&a, &b, &phi, &opts).map_err(Failure::input)?;
    let violations = reports.iter().filter(|r| r.is_violation()).count();

    let text = match args.output.format {
        Format::Json => render::json(&ReportOutput {
            dim: a.dim(),
            a: &args.inputs.a,
            b: &args.inputs.b,
            state: &args.state,
            violations,
            reports,
        })?,
        Format::Csv => render::csv(&reports)?,
        Format::Table => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.id.to_string(),
                        num(r.lhs),
                        opt_num(r.middle),
                        num(r.rhs),
                        num(r.gap),
                        flag(r.satisfied).into(),
                        flag(r.saturated).into(),
                        flag(r.trivial).into(),
                    ]
                })
                .collect();
            render::table(&["relation", "lhs", "middle", "rhs", "gap", "satisfied", "saturated", "trivial"], &rows)
        }
    };
    args.output.emit(&text)?;
    Ok(if violations > 0 { Failure::VIOLATION } else { 0 })
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated relation ids; all pair relations by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_relation)]
    relations: Vec<RelationId>,
    #[command(flatten)]
    tolerances: Tolerances,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn fuzz(args: &FuzzArgs) -> Result<u8, Failure> {
    if args.dim < 2 {
        return Err(Failure::input(format!("--dim must be at least 2, got {}", args.dim)));
    }
    let mut campaign = FuzzCampaign::random(args.dim, args.seed, args.trials);
    campaign.options = args.tolerances.options()?;
    campaign.execution = execution(args.sequential);
    if !args.relations.is_empty() {
        campaign.relations = args.relations.clone();
    }
    let summary = fuzz_campaign(&campaign).map_err(Failure::input)?;

    let text = match args.output.format {
        Format::Json => render::json(&summary)?,
        Format::Csv => render::csv(&summary.tallies)?,
        Format::Table => fuzz_table(&summary),
    };
    args.output.emit(&text)?;
    Ok(if summary.violation_count() > 0 { Failure::VIOLATION } else { 0 })
}

fn fuzz_table(summary: &CampaignSummary) -> String {
    let rows: Vec<Vec<String>> = summary
        .tallies
        .iter()
        .map(|t| {
            vec![
                t.id.to_string(),
                t.evaluated.to_string(),
                t.satisfied.to_string(),
                t.saturated.to_string(),
                t.trivial.to_string(),
                t.violations.to_string(),
                opt_num(t.worst_relative_gap),
            ]
        })
        .collect();
    let mut text = format!(
        "dim {}  trials {}  tol {:e}  violations {}  errors {}  max route gap {}\n",
        summary.dim,
        summary.trials,
        summary.tolerance,
        summary.violations.len(),
        summary.errors.len(),
        num(summary.max_std_dev_route_gap)
    );
    text.push_str(&render::table(
        &["relation", "evaluated", "satisfied", "saturated", "trivial", "violations", "worst"],
        &rows,
    ));
    text
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Eigenstate,
    Uncorrelated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    A,
    B,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Observable whose eigenvector is used (eigenstate mode).
    #[arg(long, value_enum, default_value_t = WhichArg::B)]
    which: WhichArg,
    /// Eigenvector index in ascending eigenvalue order (eigenstate mode).
    #[arg(long)]
    index: Option<usize>,
    /// Relation tolerance in eigenstate mode (default 1e-9); `|C|` target in
    /// uncorrelated mode (default 1e-8).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 1e-7)]
    sat_tol: f64,
    #[arg(long, default_value_t = 0.1)]
    min_dev: f64,
    #[arg(long, default_value_t = 64)]
    budget: usize,
    #[arg(long, default_value_t = 4000)]
    refine_evals: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
struct EigenstateOutput<'a> {
    mode: &'static str,
    pass: bool,
    #[serde(flatten)]
    case: &'a EigenstateCase,
}

#[derive(Serialize)]
struct UncorrelatedOutput<'a> {
    mode: &'static str,
    pass: bool,
    outcome: &'a UncorrelatedOutcome,
    checks: &'a [CheckResult],
}

pub fn critical(args: &CriticalArgs) -> Result<u8, Failure> {
    let resolver = Resolver::new(&args.inputs)?;
    let (a, b) = resolver.pair(&args.inputs)?;
    match args.mode {
        Mode::Eigenstate => {
            let index = args
                .index
                .ok_or_else(|| Failure::input("eigenstate mode needs --index"))?;
            let opts = Tolerances {
                tol: args.tol.unwrap_or(1e-9),
                sat_tol: args.sat_tol,
            }
            .options()?;
            let which = match args.which {
                WhichArg::A => Which::A,
                WhichArg::B => Which::B,
            };
            let case = eigenstate_case(&a, &b, which, index, &opts).map_err(Failure::input)?;
            let pass = case.passes();
            let text = match args.output.format {
                Format::Json => render::json(&EigenstateOutput {
                    mode: "eigenstate",
                    pass,
                    case: &case,
                })?,
                Format::Csv => render::csv(&case.battery)?,
                Format::Table => format!(
                    "eigenvector {} of {} (eigenvalue {})\n{}",
                    case.index,
                    case.observable_label,
                    num(case.eigenvalue),
                    checks_table(&case.battery)
                ),
            };
            args.output.emit(&text)?;
            Ok(if pass { 0 } else { Failure::VIOLATION })
        }
        Mode::Uncorrelated => {
            let cfg = UncorrelatedSearch {
                tol: args.tol.unwrap_or(1e-8),
                min_dev: args.min_dev,
                budget: args.budget,
                seed: args.seed,
                refine_evals: args.refine_evals,
                execution: execution(args.sequential),
            };
            let outcome = find_uncorrelated_state(&a, &b, &cfg).map_err(Failure::input)?;
            let checks = verify_uncorrelated_consequences(&a, &b, outcome.case()).map_err(Failure::input)?;
            let pass = outcome.is_found() && battery_passes(&checks);
            let text = match args.output.format {
                Format::Json => render::json(&UncorrelatedOutput {
                    mode: "uncorrelated",
                    pass,
                    outcome: &outcome,
                    checks: &checks,
                })?,
                Format::Csv => render::csv(&checks)?,
                Format::Table => {
                    let case = outcome.case();
                    format!(
                        "{}  |C| {}  dA {}  dB {}  objective {}\n{}",
                        if outcome.is_found() { "found" } else { "infeasible" },
                        num(case.correlation_modulus),
                        num(case.dev_a),
                        num(case.dev_b),
                        num(outcome.objective()),
                        checks_table(&checks)
                    )
                }
            };
            args.output.emit(&text)?;
            Ok(if !outcome.is_found() {
                Failure::INFEASIBLE
            } else if pass {
                0
            } else {
                Failure::VIOLATION
            })
        }
    }
}

fn checks_table(checks: &[CheckResult]) -> String {
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skipped",
                CheckStatus::Review => "review",
            };
            vec![c.name.to_string(), num(c.value), num(c.threshold), status.to_string()]
        })
        .collect();
    render::table(&["check", "value", "threshold", "status"], &rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Minimize,
    Maximize,
}

#[derive(Debug, Args)]
pub struct ExtremizeArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_parser = parse_relation)]
    relation: RelationId,
    #[arg(long, value_enum, default_value_t = DirectionArg::Minimize)]
    direction: DirectionArg,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Evaluation budget per restart.
    #[arg(long, default_value_t = 1000)]
    max_evals: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tolerances: Tolerances,
    /// Write the best-so-far gap per evaluation here (CSV if the name ends
    /// in `.csv`, JSON otherwise).
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
struct ExtremizeRow {
    relation: RelationId,
    direction: Direction,
    best_gap: f64,
    best_restart: usize,
    evaluations_used: usize,
    numerical_defect: bool,
}

pub fn extremize(args: &ExtremizeArgs) -> Result<u8, Failure> {
    let opts = args.tolerances.options()?;
    let resolver = Resolver::new(&args.inputs)?;
    let (a, b) = resolver.pair(&args.inputs)?;
    let direction = match args.direction {
        DirectionArg::Minimize => Direction::MinimizeGap,
        DirectionArg::Maximize => Direction::MaximizeGap,
    };
    let mut req = ExtremizeRequest::new(args.relation, a, b, direction);
    req.restarts = args.restarts;
    req.max_evals_per_restart = args.max_evals;
    req.seed = args.seed;
    req.options = opts;
    req.record_trace = args.trace.is_some();
    req.execution = execution(args.sequential);
    let mut result = run_extremize(&req).map_err(|e| Failure::input(format!("cannot extremize: {e}")))?;

    if let Some(path) = &args.trace {
        let trace = result.trace.take().unwrap_or_default();
        let text = if path.extension().is_some_and(|e| e == "csv") {
            render::csv(&trace)?
        } else {
            render::json(&trace)?
        };
        fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    }

    let text = match args.output.format {
        Format::Json => render::json(&result)?,
        Format::Csv => render::csv(&[row(&result)])?,
        Format::Table => extremize_table(&result),
    };
    args.output.emit(&text)?;
    Ok(if result.numerical_defect { Failure::VIOLATION } else { 0 })
}

fn row(r: &ExtremizeResult) -> ExtremizeRow {
    ExtremizeRow {
        relation: r.relation,
        direction: r.direction,
        best_gap: r.best_gap,
        best_restart: r.best_restart,
        evaluations_used: r.evaluations_used,
        numerical_defect: r.numerical_defect,
    }
}

fn extremize_table(r: &ExtremizeResult) -> String {
    let mut text = format!(
        "{} {:?}: best gap {} (restart {}, {} evaluations)\nbest state:\n",
        r.relation,
        r.direction,
        num(r.best_gap),
        r.best_restart,
        r.evaluations_used
    );
    for z in r.best_state.vector().entries() {
        text.push_str(&format!("  {:+.12} {:+.12}i\n", z.re, z.im));
    }
    text
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the problem file here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn sample(args: &SampleArgs) -> Result<u8, Failure> {
    let observables =
        sample_gue_observable(&SampleConfig::new(args.dim, args.seed, 2).map_err(Failure::input)?);
    let states = sample_haar_state(&SampleConfig::new(args.dim, args.seed, 1).map_err(Failure::input)?);
    let mut file = ProblemFile::new(args.dim);
    file.insert_observable("A", &observables[0]);
    file.insert_observable("B", &observables[1]);
    file.insert_state("phi", &states[0]);
    let mut text = file.to_json().map_err(Failure::internal)?;
    text.push('\n');
    render::emit(&text, args.out.as_deref())?;
    Ok(0)
}
