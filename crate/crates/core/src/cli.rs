//! `qalbp` command-line interface.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on runtime failures.
//! Diagnostics go to stderr; data goes to stdout or the `--out` files.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{
    feasibility_ratio, run_suite_with, solve_one, strip_timings, summarize, to_csv_string,
    to_structured_string, BinPolicy, SolverKind,
};
use crate::error::{Error, Result};
use crate::formulation::{
    build_qubo, count_variables, estimate_penalties, format_significant_trimmed, to_sparse_text,
    Formulation, DEFAULT_DELTA_FRACTION,
};
use crate::instances::{
    fixture, generate_instance, load_fixture_suite, load_instances, Instance, InstanceRecord,
};
use crate::solvers::{AnnealParams, MAX_EXACT_ITEMS};

/// Qubit budget drawn on the variable-growth comparison.
pub const QUBIT_MARKER: u64 = 5640;

#[derive(Debug, Parser)]
#[command(
    name = "qalbp",
    version,
    about = "Bin packing as QUBO with analytic penalty multipliers"
)]
pub struct Cli {
    /// Worker threads for sampling and suite runs (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance with uniform integer weights.
    Generate(GenerateArgs),
    /// Print the estimated penalty multipliers as key=value lines.
    Penalties(PenaltiesArgs),
    /// Build the QUBO for an instance and write it out.
    Build(BuildArgs),
    /// Solve instances with one solver.
    Solve(SolveArgs),
    /// Run solvers over a suite and report feasibility ratios.
    Bench(BenchArgs),
    /// Tabulate variable counts of the two encodings.
    Vars(VarsArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of items.
    pub n: usize,
    /// Smallest weight.
    #[arg(default_value_t = 4)]
    pub weight_lo: i64,
    /// Largest weight.
    #[arg(default_value_t = 10)]
    pub weight_hi: i64,
    /// Bin capacity.
    #[arg(default_value_t = 10)]
    pub capacity: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InstanceArg {
    /// Instance file (one record or an array) or a fixture name such as "(3, 23)".
    pub instance: String,
}

#[derive(Debug, Args)]
pub struct PenaltiesArgs {
    #[command(flatten)]
    pub input: InstanceArg,
    /// Bins in the model: `n`, `ffd`, or a count.
    #[arg(long, default_value = "n")]
    pub bins: BinPolicy,
    /// Fraction of the smallest overfill cost used for delta.
    #[arg(long, default_value_t = DEFAULT_DELTA_FRACTION)]
    pub delta_fraction: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum QuboFormatArg {
    Structured,
    SparseText,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: InstanceArg,
    /// Bins in the model: `n`, `ffd`, or a count.
    #[arg(long, default_value = "n")]
    pub bins: BinPolicy,
    #[arg(long, value_enum, default_value_t = QuboFormatArg::Structured)]
    pub format: QuboFormatArg,
    #[arg(long, default_value_t = DEFAULT_DELTA_FRACTION)]
    pub delta_fraction: f64,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    /// Simulated annealing on the QUBO.
    Sa,
    /// Branch-and-bound on the integer program.
    #[value(alias = "exact-bpp", alias = "exact_bpp")]
    Exact,
    /// Exhaustive QUBO minimization (at most 24 variables).
    #[value(alias = "exact_qubo")]
    ExactQubo,
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Sa => SolverKind::Sa,
            SolverArg::Exact => SolverKind::ExactBpp,
            SolverArg::ExactQubo => SolverKind::ExactQubo,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnnealArgs {
    #[arg(long, default_value_t = crate::solvers::DEFAULT_NUM_READS)]
    pub num_reads: usize,
    #[arg(long, default_value_t = crate::solvers::DEFAULT_SWEEPS)]
    pub sweeps: usize,
    /// Starting temperature (default: largest single-flip change / ln 2).
    #[arg(long)]
    pub t_initial: Option<f64>,
    /// Final temperature (default: 1e-3).
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Seed for every stochastic choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl AnnealArgs {
    fn params(&self) -> AnnealParams {
        AnnealParams {
            num_reads: self.num_reads,
            sweeps_per_read: self.sweeps,
            t_initial: self.t_initial,
            t_final: self.t_final,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RecordFormat {
    Csv,
    Structured,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InstanceArg,
    #[arg(long, value_enum, default_value_t = SolverArg::Sa)]
    pub solver: SolverArg,
    /// Bins in the model: `n`, `ffd`, or a count.
    #[arg(long, default_value = "n")]
    pub bins: BinPolicy,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    /// Write records here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RecordFormat::Csv)]
    pub format: RecordFormat,
    /// Keep wall times in the records (output is then not reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Use the 40 built-in benchmark instances.
    #[arg(long, conflicts_with = "suite")]
    pub fixtures: bool,
    /// Suite file (array of instance records).
    #[arg(long, required_unless_present = "fixtures")]
    pub suite: Option<PathBuf>,
    /// Comma-separated solvers.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sa,exact")]
    pub solvers: Vec<SolverArg>,
    /// Bins in the model: `n`, `ffd`, or a count.
    #[arg(long, default_value = "n")]
    pub bins: BinPolicy,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    /// CSV results file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON results file.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Keep wall times in result files and the summary table.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct VarsArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: u64,
    #[arg(long, default_value_t = 20)]
    pub n_max: u64,
    /// Comma-separated capacities.
    #[arg(long, value_delimiter = ',', default_value = "10,15,20")]
    pub capacities: Vec<u64>,
}

fn resolve_instances(name_or_path: &str) -> Result<Vec<Instance>> {
    let path = Path::new(name_or_path);
    if path.exists() {
        return load_instances(path);
    }
    fixture(name_or_path)
        .map(|i| vec![i])
        .ok_or_else(|| Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no such file or fixture name",
            ),
        })
}

fn single_instance(name_or_path: &str) -> Result<Instance> {
    let mut all = resolve_instances(name_or_path)?;
    if all.len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "{name_or_path} holds {} instances; this command takes one",
            all.len()
        )));
    }
    Ok(all.remove(0))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            print!("{text}");
            std::io::stdout()
                .flush()
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn num(v: f64) -> String {
    format_significant_trimmed(v, 10)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<String> {
    let inst = generate_instance(
        args.n,
        args.weight_lo,
        args.weight_hi,
        args.capacity,
        args.seed,
    )?;
    let text = serde_json::to_string_pretty(&InstanceRecord::from(&inst))
        .expect("instance serializes")
        + "\n";
    emit(&text, args.out.as_deref())?;
    Ok(text)
}

pub fn cmd_penalties(args: &PenaltiesArgs) -> Result<String> {
    let inst = single_instance(&args.input.instance)?;
    let m = args.bins.bins_for(&inst);
    let p = estimate_penalties(&inst, m, args.delta_fraction)?;
    let mut out = String::new();
    writeln!(out, "instance={}", inst.name()).unwrap();
    writeln!(out, "w_min={}", inst.min_weight()).unwrap();
    writeln!(out, "capacity={}", inst.capacity()).unwrap();
    writeln!(out, "bins={m}").unwrap();
    writeln!(out, "delta={}", num(p.delta)).unwrap();
    // Bins share one capacity, so every entry is the same.
    writeln!(out, "lambda={}", num(p.lambda[0])).unwrap();
    writeln!(out, "rho={}", num(p.rho[0])).unwrap();
    writeln!(out, "theta={}", num(p.theta)).unwrap();
    writeln!(out, "gamma={}", num(p.gamma)).unwrap();
    writeln!(out, "s_min={}", p.s_min).unwrap();
    emit(&out, None)?;
    Ok(out)
}

pub fn cmd_build(args: &BuildArgs) -> Result<String> {
    let inst = single_instance(&args.input.instance)?;
    let m = args.bins.bins_for(&inst);
    let p = estimate_penalties(&inst, m, args.delta_fraction)?;
    let q = build_qubo(&inst, &p, m)?;
    let text = match args.format {
        QuboFormatArg::Structured => crate::formulation::to_structured_string(&q),
        QuboFormatArg::SparseText => to_sparse_text(&q),
    };
    emit(&text, args.out.as_deref())?;
    if args.out.is_some() {
        eprintln!("{}: {} variables (m = {m})", inst.name(), q.num_vars);
    }
    Ok(text)
}

fn record_text(records: &[crate::bench::SolveRecord], format: RecordFormat) -> String {
    match format {
        RecordFormat::Csv => to_csv_string(records),
        RecordFormat::Structured => to_structured_string(records),
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<String> {
    let instances = resolve_instances(&args.input.instance)?;
    let params = args.anneal.params();
    params.validate()?;
    let solver = SolverKind::from(args.solver);
    let mut records = Vec::new();
    let mut summary = String::new();
    for inst in &instances {
        let optimum = if solver == SolverKind::ExactBpp || inst.n() > MAX_EXACT_ITEMS {
            None
        } else {
            Some(solve_one(inst, SolverKind::ExactBpp, &params, args.bins, None)?.bins_used)
        };
        let r = solve_one(inst, solver, &params, args.bins, optimum)?;
        write!(
            summary,
            "{}: solver={} bins={} feasible={}",
            r.instance_name, r.solver, r.bins_used, r.feasible
        )
        .unwrap();
        if let Some(e) = r.energy {
            write!(summary, " energy={}", num(e)).unwrap();
        }
        if let Some(g) = r.opt_gap {
            write!(summary, " opt_gap={g}").unwrap();
        }
        writeln!(summary).unwrap();
        records.push(r);
    }
    if !args.timings {
        strip_timings(&mut records);
    }
    emit(&summary, None)?;
    if let Some(path) = &args.out {
        emit(&record_text(&records, args.format), Some(path))?;
    }
    Ok(summary)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<String> {
    let instances = match &args.suite {
        Some(path) => load_instances(path)?,
        None => load_fixture_suite(),
    };
    let solvers: Vec<SolverKind> = {
        let mut s: Vec<SolverKind> = args.solvers.iter().map(|&s| s.into()).collect();
        s.dedup();
        s
    };
    let params = args.anneal.params();
    params.validate()?;
    let mut records = run_suite_with(&instances, &solvers, &params, args.bins)?;
    if !args.timings {
        strip_timings(&mut records);
    }

    if let Some(path) = &args.out {
        emit(&to_csv_string(&records), Some(path))?;
    }
    if let Some(path) = &args.json {
        emit(&to_structured_string(&records), Some(path))?;
    }

    let mut out = String::new();
    writeln!(
        out,
        "solver,n,instances,feasible,optimal,feasibility_ratio,mean_bins,mean_tts_us"
    )
    .unwrap();
    for &solver in &solvers {
        let ratios = feasibility_ratio(&records, solver)?;
        for c in summarize(&records, solver)? {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                solver,
                c.n,
                c.instances,
                c.feasible,
                c.optimal,
                num(ratios[&c.n]),
                num(c.mean_bins),
                c.mean_tts_us
                    .map(|t| crate::formulation::format_significant(t, 6))
                    .unwrap_or_default()
            )
            .unwrap();
        }
    }
    emit(&out, None)?;
    Ok(out)
}

pub fn cmd_vars(args: &VarsArgs) -> Result<String> {
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(Error::InvalidArgument(format!(
            "invalid item range {}..={}",
            args.n_min, args.n_max
        )));
    }
    let mut out = String::new();
    writeln!(
        out,
        "n,capacity,qal_bp,pseudo_polynomial,qal_bp_over_{QUBIT_MARKER},pseudo_over_{QUBIT_MARKER}"
    )
    .unwrap();
    for n in args.n_min..=args.n_max {
        for &c in &args.capacities {
            let qal = count_variables(Formulation::QalBp, n, n, c);
            let pseudo = count_variables(Formulation::PseudoPolynomial, n, n, c);
            writeln!(
                out,
                "{n},{c},{qal},{pseudo},{},{}",
                qal > QUBIT_MARKER,
                pseudo > QUBIT_MARKER
            )
            .unwrap();
        }
    }
    emit(&out, None)?;
    Ok(out)
}

fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Generate(a) => cmd_generate(a).map(drop),
        Command::Penalties(a) => cmd_penalties(a).map(drop),
        Command::Build(a) => cmd_build(a).map(drop),
        Command::Solve(a) => cmd_solve(a).map(drop),
        Command::Bench(a) => cmd_bench(a).map(drop),
        Command::Vars(a) => cmd_vars(a).map(drop),
    }
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        },
        None => dispatch(&cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
