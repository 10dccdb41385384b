//! Penalty estimation, QUBO construction, decoding and export.

mod assignment;
mod builder;
mod penalties;
mod qubo;

pub use assignment::{
    check_feasibility, decode, encode, Assignment, CapacityViolation, FeasibilityReport,
    ItemViolation,
};
pub use builder::{build_qubo, build_with_capacities, direct_energy};
pub use penalties::{
    estimate_penalties, estimate_penalties_with, lambda_for, rho_for, EstimateOptions, Penalties,
    DEFAULT_DELTA_FRACTION, DEFAULT_GAMMA, DEFAULT_S_MIN, DEFAULT_THETA,
};
pub use qubo::{
    export_qubo, format_sig10, format_significant, format_significant_trimmed, import_qubo,
    parse_sparse_text, parse_structured, qubo_energy, to_sparse_text, to_structured_string,
    Adjacency, Layout, Qubo, QuboFormat, INDEX_CONVENTION,
};

/// Encodings whose variable counts can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// `m` bin flags plus `n m` placements.
    QalBp,
    /// The same variables plus `n C` capacity slack bits.
    PseudoPolynomial,
}

/// Number of binary variables a formulation needs for `n` items, `m` bins
/// and capacity `capacity`.
pub fn count_variables(formulation: Formulation, n: u64, m: u64, capacity: u64) -> u64 {
    let base = m * (n + 1);
    match formulation {
        Formulation::QalBp => base,
        Formulation::PseudoPolynomial => base + n * capacity,
    }
}

/// Smallest item count `n` (with `m = n`) whose variable count exceeds
/// `threshold`.
pub fn first_n_exceeding(formulation: Formulation, capacity: u64, threshold: u64) -> u64 {
    let mut n = 1;
    while count_variables(formulation, n, n, capacity) <= threshold {
        n += 1;
    }
    n
}
