//! Command-line definitions and dispatch. Exit statuses follow the SAT
//! solver convention: 10 satisfiable, 20 unsatisfiable, 0 undecided
//! (timeout) or plain success, 1 error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use atlsat_core::formula::{
    format_formula, generate_matching, generate_random_formula, parse_formula, Coalition, Formula, GenError, GenParams,
    ParseError,
};
use atlsat_core::mas::{encode_model, to_dot, ModelShape, ShapeError, Witness, WitnessError};
use atlsat_core::mc::check_validity;
use atlsat_core::solver::{solve_satisfiability, Config, Policy, Requirements, SolveError, SolverResult, Verdict};

use crate::report::{BenchReport, RunReport};
use crate::reqfile::{ReqFileError, RequirementsFile};
use crate::sweep::{self, SweepError, SweepOptions};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_ERROR: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "atlsat", version, about = "Bounded ATL satisfiability checking and model synthesis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a model of the given shape satisfying a formula.
    Check(CheckArgs),
    /// Print random formulas, one per line.
    Generate(GenerateArgs),
    /// Solve a list of formulas and print a results table.
    Bench(BenchArgs),
    /// Re-check a witness file against a formula.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FormulaArgs {
    /// Formula text.
    #[arg(short = 'f', long, conflicts_with = "formula_file")]
    pub formula: Option<String>,
    /// File holding the formula.
    #[arg(long)]
    pub formula_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Requirements JSON file.
    #[arg(long, conflicts_with_all = ["locals", "props"])]
    pub req: Option<PathBuf>,
    /// Local state counts per agent, e.g. `3,2`; initial locals are 0.
    #[arg(long, value_delimiter = ',')]
    pub locals: Option<Vec<usize>>,
    /// Number of propositions (with --locals).
    #[arg(long)]
    pub props: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    TbOneVbZero,
    AllZero,
    AllOne,
    Random,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Policy {
        match p {
            PolicyArg::TbOneVbZero => Policy::TbOneVbZero,
            PolicyArg::AllZero => Policy::AllZero,
            PolicyArg::AllOne => Policy::AllOne,
            PolicyArg::Random => Policy::Random,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Seed for the random decision policy.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Time limit in seconds (per formula for bench).
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Shrink theory conflict clauses before learning them.
    #[arg(long)]
    pub minimize_conflicts: bool,
    #[arg(long, value_enum, default_value_t = PolicyArg::TbOneVbZero)]
    pub policy: PolicyArg,
    /// Print search statistics.
    #[arg(short, long)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub formula: FormulaArgs,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Write the witness model as JSON.
    #[arg(long)]
    pub out_json: Option<PathBuf>,
    /// Write the witness transition graph in Graphviz DOT.
    #[arg(long)]
    pub out_dot: Option<PathBuf>,
    /// Reload the witness from its JSON form and model-check it again.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = sweep::AGENTS)]
    pub agents: usize,
    #[arg(long, default_value_t = 4)]
    pub groups: usize,
    #[arg(long, default_value_t = sweep::PROPS)]
    pub props: usize,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Coalition pool as `;`-separated agent lists, e.g. `0;1;0,1;2`.
    #[arg(long)]
    pub pool: Option<String>,
    /// Only emit formulas with exactly this many Boolean connectives.
    #[arg(long)]
    pub connectives: Option<usize>,
    /// Print the first generated match for every row of the scaling sweep.
    #[arg(long, conflicts_with_all = ["depth", "connectives", "count"])]
    pub sweep: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Formula list, one per line; blank lines and `#` comments are skipped.
    #[arg(long, required_unless_present = "sweep")]
    pub formulas: Option<PathBuf>,
    /// Run the eight-row scaling sweep (default shape 2,2,2 with 3 props).
    #[arg(long, conflicts_with = "formulas")]
    pub sweep: bool,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Write the report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Leave wall-clock times out of both outputs so reruns are identical.
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub witness: PathBuf,
    #[command(flatten)]
    pub formula: FormulaArgs,
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("formula: {0}")]
    Parse(#[from] ParseError),
    #[error("{path}:{line}: {source}")]
    ParseAt { path: PathBuf, line: usize, source: ParseError },
    #[error("a formula is required (--formula or --formula-file)")]
    NoFormula,
    #[error("a shape is required (--req, or --locals with --props)")]
    NoShape,
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    ReqFile(#[from] ReqFileError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("witness: {0}")]
    Witness(#[from] WitnessError),
    #[error("invalid pool entry {0:?}")]
    Pool(String),
    #[error("--timeout must be a non-negative number of seconds")]
    Timeout,
    #[error("witness failed verification")]
    Unverified,
    #[error("no formula with {0} connectives found")]
    NoMatch(usize),
}

fn read(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|source| AppError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), AppError> {
    fs::write(path, text).map_err(|source| AppError::Io { path: path.to_path_buf(), source })
}

fn load_formula(args: &FormulaArgs) -> Result<Formula, AppError> {
    match (&args.formula, &args.formula_file) {
        (Some(text), _) => Ok(parse_formula(text)?),
        (None, Some(path)) => parse_formula(&read(path)?).map_err(|source| AppError::ParseAt {
            path: path.clone(),
            line: source.line,
            source,
        }),
        (None, None) => Err(AppError::NoFormula),
    }
}

fn load_requirements(args: &ShapeArgs, default: Option<(Vec<usize>, usize)>) -> Result<Requirements, AppError> {
    if let Some(path) = &args.req {
        return Ok(RequirementsFile::parse(&read(path)?)?.to_requirements()?);
    }
    let (locals, props) = match (&args.locals, args.props) {
        (Some(l), Some(p)) => (l.clone(), p),
        _ => default.ok_or(AppError::NoShape)?,
    };
    Ok(Requirements::new(ModelShape::uniform(locals, props)?))
}

fn solver_config(args: &SolveArgs) -> Result<Config, AppError> {
    let time_limit = match args.timeout {
        None => None,
        Some(t) if t.is_finite() && t >= 0.0 => Some(Duration::from_secs_f64(t)),
        Some(_) => return Err(AppError::Timeout),
    };
    Ok(Config { policy: args.policy.into(), minimize_conflicts: args.minimize_conflicts, seed: args.seed, time_limit })
}

fn parse_pool(text: &str) -> Result<Vec<Coalition>, AppError> {
    text.split(';')
        .map(|group| {
            let members = group
                .split(',')
                .map(|a| a.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| AppError::Pool(group.to_string()))?;
            Coalition::new(members).map_err(|_| AppError::Pool(group.to_string()))
        })
        .collect()
}

fn exit_for(v: Verdict) -> i32 {
    match v {
        Verdict::Sat => EXIT_SAT,
        Verdict::Unsat => EXIT_UNSAT,
        Verdict::Timeout => 0,
    }
}

fn print_stats(out: &mut dyn Write, res: &SolverResult) {
    let s = res.stats();
    let _ = writeln!(
        out,
        "c decisions={} conflicts={} theory_conflicts={} theory_checks={} propagations={} learned={} time={:.3}s",
        s.decisions,
        s.conflicts,
        s.theory_conflicts,
        s.theory_checks,
        s.propagations,
        s.learned,
        s.wall_time.as_secs_f64()
    );
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32, AppError> {
    let f = load_formula(&args.formula)?;
    let req = load_requirements(&args.shape, None)?;
    let res = solve_satisfiability(&f, &req, &solver_config(&args.solve)?)?;
    let _ = writeln!(out, "{}", res.verdict());
    if args.solve.verbose {
        print_stats(out, &res);
    }
    if let Some(m) = res.witness() {
        let _ = writeln!(out, "bits {}", encode_model(m));
        let witness = Witness::from_model(m);
        let json = witness.to_json();
        if let Some(path) = &args.out_json {
            write(path, &json)?;
        }
        if let Some(path) = &args.out_dot {
            write(path, &to_dot(m))?;
        }
        if args.verify {
            let text = match &args.out_json {
                Some(path) => read(path)?,
                None => json,
            };
            let reloaded = Witness::from_json(&text)?.to_model()?;
            if !check_validity(&reloaded, &f)? {
                return Err(AppError::Unverified);
            }
            let _ = writeln!(out, "verified");
        }
    }
    Ok(exit_for(res.verdict()))
}

fn generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<i32, AppError> {
    if args.sweep {
        for (id, &(depth, connectives)) in sweep::TARGETS.iter().enumerate() {
            let params = GenParams::new(sweep::AGENTS, 4, sweep::PROPS, depth, args.seed).with_pool(sweep::pool());
            let (_, f) = generate_matching(&params, connectives, 1_000_000)?.ok_or(AppError::NoMatch(connectives))?;
            let f = if id == 0 { sweep::first_formula() } else { f };
            let _ = writeln!(out, "{}", format_formula(&f));
        }
        return Ok(0);
    }
    let mut params = GenParams::new(args.agents, args.groups, args.props, args.depth, args.seed);
    if let Some(pool) = &args.pool {
        params = params.with_pool(parse_pool(pool)?);
    }
    let mut seed = args.seed;
    for _ in 0..args.count {
        let p = GenParams { seed, ..params.clone() };
        let f = match args.connectives {
            None => {
                seed += 1;
                generate_random_formula(&p)?
            }
            Some(c) => {
                let (hit, f) = generate_matching(&p, c, 1_000_000)?.ok_or(AppError::NoMatch(c))?;
                seed = hit + 1;
                f
            }
        };
        let _ = writeln!(out, "{}", format_formula(&f));
    }
    Ok(0)
}

fn read_formula_list(path: &Path) -> Result<Vec<Formula>, AppError> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f = parse_formula(line).map_err(|source| AppError::ParseAt {
            path: path.to_path_buf(),
            line: k + 1,
            source,
        })?;
        out.push(f);
    }
    Ok(out)
}

fn bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32, AppError> {
    let timing = !args.omit_timing;
    let config = solver_config(&args.solve)?;
    let (req, rows) = if args.sweep {
        let req = load_requirements(&args.shape, Some((vec![2; sweep::AGENTS], sweep::PROPS)))?;
        let opts = SweepOptions {
            config: Config { minimize_conflicts: true, ..config.clone() },
            timeout: config.time_limit.or(SweepOptions::default().timeout),
            timing,
            ..SweepOptions::default()
        };
        let rows = sweep::run_sweep(&req, &opts)?;
        (req, rows)
    } else {
        let req = load_requirements(&args.shape, None)?;
        let formulas = read_formula_list(args.formulas.as_deref().expect("clap requires --formulas"))?;
        let mut rows = Vec::with_capacity(formulas.len());
        for (k, f) in formulas.iter().enumerate() {
            let res = solve_satisfiability(f, &req, &config)?;
            rows.push(RunReport::new(k + 1, f, &res, timing));
        }
        (req, rows)
    };
    let report = BenchReport { locals: req.shape.locals().to_vec(), props: req.shape.prop_count(), rows };
    let _ = write!(out, "{}", report.table());
    if args.solve.verbose {
        for r in &report.rows {
            let _ = writeln!(out, "c {} {}", r.id, r.formula);
        }
    }
    if let Some(path) = &args.json {
        write(path, &report.to_json())?;
    }
    Ok(0)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, AppError> {
    let f = load_formula(&args.formula)?;
    let m = Witness::from_json(&read(&args.witness)?)?.to_model()?;
    let holds = check_validity(&m, &f).map_err(SolveError::from)?;
    let _ = writeln!(out, "{}", if holds { "VALID" } else { "INVALID" });
    Ok(if holds { EXIT_SAT } else { EXIT_UNSAT })
}

impl From<atlsat_core::formula::BoundsError> for AppError {
    fn from(e: atlsat_core::formula::BoundsError) -> Self {
        AppError::Solve(SolveError::Bounds(e))
    }
}

/// Runs one command, writing results to `out`. Errors are returned for the
/// caller to report.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, AppError> {
    match &cli.command {
        Command::Check(a) => check(a, out),
        Command::Generate(a) => generate(a, out),
        Command::Bench(a) => bench(a, out),
        Command::Verify(a) => verify(a, out),
    }
}
