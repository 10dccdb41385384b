//! Simulated annealing over single-bit flips.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulation::{Adjacency, Qubo};

pub const DEFAULT_NUM_READS: usize = 1000;
pub const DEFAULT_SWEEPS: usize = 1000;
pub const DEFAULT_T_FINAL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    pub num_reads: usize,
    pub sweeps_per_read: usize,
    pub t_initial: Option<f64>,
    pub t_final: Option<f64>,
    pub seed: u64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            num_reads: DEFAULT_NUM_READS,
            sweeps_per_read: DEFAULT_SWEEPS,
            t_initial: None,
            t_final: None,
            seed: 0,
        }
    }
}

impl AnnealParams {
    pub fn with_seed(seed: u64) -> Self {
        AnnealParams {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidAnnealParams(msg));
        if self.num_reads == 0 {
            return bad("num_reads must be at least 1".into());
        }
        if self.sweeps_per_read == 0 {
            return bad("sweeps_per_read must be at least 1".into());
        }
        for (name, t) in [("t_initial", self.t_initial), ("t_final", self.t_final)] {
            if let Some(t) = t {
                if !(t.is_finite() && t > 0.0) {
                    return bad(format!("{name} must be positive, got {t}"));
                }
            }
        }
        if let (Some(hi), Some(lo)) = (self.t_initial, self.t_final) {
            if hi <= lo {
                return bad(format!("t_initial ({hi}) must exceed t_final ({lo})"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub bits: Vec<bool>,
    pub energy: f64,
    pub num_occurrences: usize,
}

/// Distinct final states, lowest energy first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
    pub wall_time_us: f64,
}

impl SampleSet {
    pub fn best(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn total_reads(&self) -> usize {
        self.samples.iter().map(|s| s.num_occurrences).sum()
    }

    /// Groups identical bitstrings, re-evaluates each with `qubo`, and sorts
    /// by energy then bitstring.
    pub fn from_reads(qubo: &Qubo, reads: Vec<Vec<bool>>, wall_time_us: f64) -> Self {
        let mut counts: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        for bits in reads {
            *counts.entry(bits).or_insert(0) += 1;
        }
        let mut samples: Vec<Sample> = counts
            .into_iter()
            .map(|(bits, num_occurrences)| Sample {
                energy: qubo.energy(&bits).expect("read length matches qubo"),
                bits,
                num_occurrences,
            })
            .collect();
        samples.sort_by(|a, b| {
            a.energy
                .total_cmp(&b.energy)
                .then_with(|| a.bits.cmp(&b.bits))
        });
        SampleSet {
            samples,
            wall_time_us,
        }
    }
}

/// Default starting temperature: the largest energy change any single flip
/// can cause, divided by `ln 2`, so the worst uphill move starts out accepted
/// half the time.
pub fn default_t_initial(adj: &Adjacency) -> f64 {
    (0..adj.num_vars())
        .map(|k| adj.linear[k].abs() + adj.neighbors[k].iter().map(|(_, v)| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        / std::f64::consts::LN_2
}

/// Geometric schedule with one temperature per sweep.
pub fn temperature_schedule(t_initial: f64, t_final: f64, sweeps: usize) -> Vec<f64> {
    if sweeps == 1 {
        return vec![t_final];
    }
    let ratio = (t_final / t_initial).powf(1.0 / (sweeps - 1) as f64);
    let mut t = t_initial;
    (0..sweeps)
        .map(|_| {
            let cur = t;
            t *= ratio;
            cur
        })
        .collect()
}

/// Seed for read `read`. Mixed only by XOR so any read can be replayed alone.
pub fn read_seed(seed: u64, read: usize) -> u64 {
    seed ^ read as u64
}

fn anneal_one(adj: &Adjacency, betas: &[f64], seed: u64) -> Vec<bool> {
    let n = adj.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits: Vec<bool> = (0..n).map(|_| rng.gen::<bool>()).collect();
    let mut fields = adj.local_fields(&bits);
    let mut order: Vec<usize> = (0..n).collect();
    for &beta in betas {
        order.shuffle(&mut rng);
        for &k in &order {
            let delta = if bits[k] { -fields[k] } else { fields[k] };
            let accept = if delta <= 0.0 {
                true
            } else {
                let x = delta * beta;
                // exp(-40) is below the resolution of a uniform f64 draw.
                x < 40.0 && rng.gen::<f64>() < (-x).exp()
            };
            if accept {
                adj.flip(&mut bits, &mut fields, k);
            }
        }
    }
    bits
}

/// Runs `num_reads` independent anneals from uniformly random starts.
///
/// Reads are seeded with [`read_seed`] and run on the current rayon pool;
/// the result does not depend on the number of threads.
pub fn simulated_annealing(qubo: &Qubo, params: &AnnealParams) -> Result<SampleSet> {
    params.validate()?;
    if qubo.num_vars == 0 {
        return Err(Error::InvalidAnnealParams("QUBO has no variables".into()));
    }
    let start = Instant::now();
    let adj = qubo.adjacency();
    let t_final = params.t_final.unwrap_or(DEFAULT_T_FINAL);
    let t_initial = params
        .t_initial
        .unwrap_or_else(|| default_t_initial(&adj))
        .max(t_final);
    let betas: Vec<f64> = temperature_schedule(t_initial, t_final, params.sweeps_per_read)
        .into_iter()
        .map(|t| 1.0 / t)
        .collect();

    let reads: Vec<Vec<bool>> = (0..params.num_reads)
        .into_par_iter()
        .map(|r| anneal_one(&adj, &betas, read_seed(params.seed, r)))
        .collect();
    let set = SampleSet::from_reads(qubo, reads, 0.0);
    Ok(SampleSet {
        wall_time_us: start.elapsed().as_secs_f64() * 1e6,
        ..set
    })
}
