//! Suite runner, metrics and result files.
//!
//! Each (instance, solver) pair produces one [`SolveRecord`]. QUBO solvers
//! report the minimum-energy sample, decoded and checked against the original
//! constraints. The exact solver supplies the optimum used for `opt_gap`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulation::{
    build_qubo, check_feasibility, decode, estimate_penalties, format_significant, Qubo,
    DEFAULT_DELTA_FRACTION,
};
use crate::instances::{first_fit_decreasing, Instance};
use crate::solvers::{
    brute_force_qubo, simulated_annealing, solve_exact_bpp, AnnealParams, MAX_EXACT_ITEMS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Sa,
    ExactQubo,
    ExactBpp,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Sa => "sa",
            SolverKind::ExactQubo => "exact_qubo",
            SolverKind::ExactBpp => "exact_bpp",
        }
    }

    pub fn is_qubo(self) -> bool {
        !matches!(self, SolverKind::ExactBpp)
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sa" => Ok(SolverKind::Sa),
            "exact_qubo" | "exact-qubo" => Ok(SolverKind::ExactQubo),
            "exact_bpp" | "exact-bpp" | "exact" => Ok(SolverKind::ExactBpp),
            other => Err(format!("unknown solver {other:?}")),
        }
    }
}

/// How many bins the QUBO model gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BinPolicy {
    /// One bin per item.
    #[default]
    ItemCount,
    /// The first-fit-decreasing bin count.
    Ffd,
    Explicit(usize),
}

impl BinPolicy {
    pub fn bins_for(self, instance: &Instance) -> usize {
        match self {
            BinPolicy::ItemCount => instance.n(),
            BinPolicy::Ffd => first_fit_decreasing(instance).num_bins(),
            BinPolicy::Explicit(m) => m,
        }
    }
}

impl FromStr for BinPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "n" => Ok(BinPolicy::ItemCount),
            "ffd" => Ok(BinPolicy::Ffd),
            _ => match s.parse::<usize>() {
                Ok(m) if m >= 1 => Ok(BinPolicy::Explicit(m)),
                _ => Err(format!(
                    "expected `n`, `ffd` or a positive integer, got {s:?}"
                )),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub instance_name: String,
    pub n: usize,
    pub solver: SolverKind,
    pub bins_used: usize,
    pub feasible: bool,
    pub energy: Option<f64>,
    /// Wall time in microseconds. Solvers always fill it; see
    /// [`strip_timings`] for reproducible output files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tts_us: Option<f64>,
    pub seed: Option<u64>,
    /// `bins_used` minus the exact optimum. Negative values mean an
    /// infeasible solution undercounted bins.
    pub opt_gap: Option<i64>,
}

impl SolveRecord {
    fn sort_key(&self) -> (usize, &str, &'static str) {
        (self.n, &self.instance_name, self.solver.name())
    }
}

/// Clears wall times so that exported files depend only on the inputs.
pub fn strip_timings(records: &mut [SolveRecord]) {
    for r in records {
        r.tts_us = None;
    }
}

/// Sorts by `(n, instance_name, solver name)`.
pub fn sort_records(records: &mut [SolveRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Builds the QUBO for `instance` with default penalties.
pub fn qubo_for(instance: &Instance, policy: BinPolicy) -> Result<Qubo> {
    let m = policy.bins_for(instance);
    let penalties = estimate_penalties(instance, m, DEFAULT_DELTA_FRACTION)?;
    build_qubo(instance, &penalties, m)
}

/// Best bitstring found by a QUBO solver, with its energy and wall time.
struct QuboOutcome<'a> {
    bits: &'a [bool],
    energy: f64,
    tts_us: f64,
}

fn qubo_record(
    instance: &Instance,
    qubo: &Qubo,
    solver: SolverKind,
    outcome: QuboOutcome,
    seed: Option<u64>,
    optimum: Option<usize>,
) -> Result<SolveRecord> {
    let QuboOutcome {
        bits,
        energy,
        tts_us,
    } = outcome;
    let layout = qubo.layout.expect("bin packing QUBO has a layout");
    let assignment = decode(bits, layout)?;
    let report = check_feasibility(instance, &assignment);
    Ok(SolveRecord {
        instance_name: instance.name().to_string(),
        n: instance.n(),
        solver,
        bins_used: assignment.bins_used,
        feasible: report.feasible,
        energy: Some(energy),
        tts_us: Some(tts_us),
        seed,
        opt_gap: optimum.map(|o| assignment.bins_used as i64 - o as i64),
    })
}

/// Runs one solver on one instance. `optimum` fills `opt_gap` when known.
pub fn solve_one(
    instance: &Instance,
    solver: SolverKind,
    params: &AnnealParams,
    policy: BinPolicy,
    optimum: Option<usize>,
) -> Result<SolveRecord> {
    match solver {
        SolverKind::ExactBpp => {
            let (solution, tts_us) = solve_exact_bpp(instance)?;
            Ok(SolveRecord {
                instance_name: instance.name().to_string(),
                n: instance.n(),
                solver,
                bins_used: solution.num_bins(),
                feasible: true,
                energy: None,
                tts_us: Some(tts_us),
                seed: None,
                opt_gap: Some(0),
            })
        }
        SolverKind::Sa => {
            let qubo = qubo_for(instance, policy)?;
            let set = simulated_annealing(&qubo, params)?;
            let best = set.best();
            qubo_record(
                instance,
                &qubo,
                solver,
                QuboOutcome {
                    bits: &best.bits,
                    energy: best.energy,
                    tts_us: set.wall_time_us,
                },
                Some(params.seed),
                optimum,
            )
        }
        SolverKind::ExactQubo => {
            let qubo = qubo_for(instance, policy)?;
            let start = Instant::now();
            let (bits, energy) = brute_force_qubo(&qubo)?;
            let tts_us = start.elapsed().as_secs_f64() * 1e6;
            let outcome = QuboOutcome {
                bits: &bits,
                energy,
                tts_us,
            };
            qubo_record(instance, &qubo, solver, outcome, None, optimum)
        }
    }
}

/// One record per (instance, solver) with `m = n`.
pub fn run_suite(
    instances: &[Instance],
    solvers: &[SolverKind],
    params: &AnnealParams,
) -> Result<Vec<SolveRecord>> {
    run_suite_with(instances, solvers, params, BinPolicy::ItemCount)
}

pub fn run_suite_with(
    instances: &[Instance],
    solvers: &[SolverKind],
    params: &AnnealParams,
    policy: BinPolicy,
) -> Result<Vec<SolveRecord>> {
    if instances.is_empty() || solvers.is_empty() {
        return Err(Error::InvalidArgument(
            "suite needs at least one instance and one solver".into(),
        ));
    }
    let mut records: Vec<SolveRecord> = instances
        .par_iter()
        .map(|inst| -> Result<Vec<SolveRecord>> {
            // The optimum is needed for opt_gap even when exact_bpp is not
            // one of the requested solvers.
            let exact = if inst.n() <= MAX_EXACT_ITEMS {
                Some(solve_one(inst, SolverKind::ExactBpp, params, policy, None)?)
            } else {
                None
            };
            let optimum = exact.as_ref().map(|r| r.bins_used);
            solvers
                .iter()
                .map(|&s| match (&exact, s) {
                    (Some(r), SolverKind::ExactBpp) => Ok(r.clone()),
                    _ => solve_one(inst, s, params, policy, optimum),
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    sort_records(&mut records);
    Ok(records)
}

/// Fraction of instances per item-count class whose reported solution is
/// feasible.
pub fn feasibility_ratio(
    records: &[SolveRecord],
    solver: SolverKind,
) -> Result<BTreeMap<usize, f64>> {
    let mut classes: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.solver == solver) {
        let entry = classes.entry(r.n).or_insert((0, 0));
        entry.0 += r.feasible as usize;
        entry.1 += 1;
    }
    if classes.is_empty() {
        return Err(Error::MissingSolver(solver.name().to_string()));
    }
    Ok(classes
        .into_iter()
        .map(|(n, (ok, total))| (n, ok as f64 / total as f64))
        .collect())
}

/// Per-class solution quality for one solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub n: usize,
    pub instances: usize,
    pub feasible: usize,
    /// Feasible solutions that use the optimal bin count.
    pub optimal: usize,
    pub mean_bins: f64,
    /// `None` unless every record carries a wall time.
    pub mean_tts_us: Option<f64>,
}

pub fn summarize(records: &[SolveRecord], solver: SolverKind) -> Result<Vec<ClassSummary>> {
    let mut classes: BTreeMap<usize, Vec<&SolveRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.solver == solver) {
        classes.entry(r.n).or_default().push(r);
    }
    if classes.is_empty() {
        return Err(Error::MissingSolver(solver.name().to_string()));
    }
    Ok(classes
        .into_iter()
        .map(|(n, rs)| {
            let k = rs.len() as f64;
            ClassSummary {
                n,
                instances: rs.len(),
                feasible: rs.iter().filter(|r| r.feasible).count(),
                optimal: rs
                    .iter()
                    .filter(|r| r.feasible && r.opt_gap == Some(0))
                    .count(),
                mean_bins: rs.iter().map(|r| r.bins_used as f64).sum::<f64>() / k,
                mean_tts_us: rs
                    .iter()
                    .map(|r| r.tts_us)
                    .sum::<Option<f64>>()
                    .map(|t| t / k),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFormat {
    Csv,
    /// JSON array of records.
    Structured,
}

pub const CSV_HEADER: [&str; 9] = [
    "instance_name",
    "n",
    "solver",
    "bins_used",
    "feasible",
    "energy",
    "tts_us",
    "seed",
    "opt_gap",
];

fn sorted(records: &[SolveRecord]) -> Vec<SolveRecord> {
    let mut out = records.to_vec();
    sort_records(&mut out);
    out
}

/// CSV text with a header row; floats carry 6 significant digits and absent
/// values (including stripped timings) are empty fields.
pub fn to_csv_string(records: &[SolveRecord]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in sorted(records) {
        w.write_record([
            r.instance_name.clone(),
            r.n.to_string(),
            r.solver.name().to_string(),
            r.bins_used.to_string(),
            r.feasible.to_string(),
            r.energy
                .map(|e| format_significant(e, 6))
                .unwrap_or_default(),
            r.tts_us
                .map(|t| format_significant(t, 6))
                .unwrap_or_default(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.opt_gap.map(|g| g.to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn to_structured_string(records: &[SolveRecord]) -> String {
    serde_json::to_string_pretty(&sorted(records)).expect("records serialize") + "\n"
}

pub fn export_results(
    records: &[SolveRecord],
    path: impl AsRef<Path>,
    format: ResultFormat,
) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        ResultFormat::Csv => to_csv_string(records),
        ResultFormat::Structured => to_structured_string(records),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads records written by [`export_results`] in either format; JSON is
/// recognized by a leading `[`.
pub fn import_results(path: impl AsRef<Path>) -> Result<Vec<SolveRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).map_err(|e| Error::json(path, e));
    }
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })
}
