//! QUBO samplers and the exact bin packing solver.

mod anneal;
mod brute;
mod exact;

pub use anneal::{
    default_t_initial, read_seed, simulated_annealing, temperature_schedule, AnnealParams, Sample,
    SampleSet, DEFAULT_NUM_READS, DEFAULT_SWEEPS, DEFAULT_T_FINAL,
};
pub use brute::{brute_force_qubo, MAX_BRUTE_FORCE_VARS};
pub use exact::{solve_exact_bpp, MAX_EXACT_ITEMS};
