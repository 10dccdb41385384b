//! Bin packing solved through a QUBO encoding.
//!
//! Instances are encoded with an augmented Lagrangian formulation whose
//! penalty multipliers are derived in closed form from the smallest item
//! weight and the bin capacity, so no per-instance parameter sweep is needed.
//! The resulting QUBO is minimized by simulated annealing or exhaustive
//! enumeration, and checked against an exact branch-and-bound solver for the
//! original integer program.
//!
//! Modules:
//! - [`instances`]: problem instances, the benchmark fixtures, bounds and FFD.
//! - [`formulation`]: penalty estimation, QUBO construction, decoding and export.
//! - [`solvers`]: simulated annealing, brute-force QUBO minimization, exact BPP.
//! - [`bench`]: suite runner, metrics and result files.
//! - [`cli`]: the `qalbp` command-line front end.

pub mod bench;
pub mod cli;
pub mod error;
pub mod formulation;
pub mod instances;
pub mod solvers;

pub use error::{Error, Result};
pub use formulation::{
    build_qubo, check_feasibility, count_variables, decode, direct_energy, encode,
    estimate_penalties, Assignment, FeasibilityReport, Formulation, Layout, Penalties, Qubo,
    QuboFormat,
};
pub use instances::{
    first_fit_decreasing, generate_instance, l1_lower_bound, load_fixture_suite, make_instance,
    Instance, Solution,
};
pub use solvers::{
    brute_force_qubo, simulated_annealing, solve_exact_bpp, AnnealParams, Sample, SampleSet,
};
