//! Exhaustive QUBO minimization.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formulation::{Adjacency, Qubo};

pub const MAX_BRUTE_FORCE_VARS: usize = 24;

/// Bits fixed per work chunk; the rest are enumerated by Gray code.
const CHUNK_BITS: usize = 6;

/// Energies closer than this are treated as ties.
fn tie_tolerance(e: f64) -> f64 {
    1e-9 * (1.0 + e.abs())
}

#[derive(Clone)]
struct Best {
    bits: Vec<bool>,
    energy: f64,
}

impl Best {
    /// Lower energy wins; near-ties go to the lexicographically smaller
    /// bitstring (index 0 most significant, `false < true`).
    fn offer(&mut self, bits: &[bool], energy: f64) {
        let tol = tie_tolerance(self.energy);
        if energy < self.energy - tol
            || (energy <= self.energy + tol && bits < self.bits.as_slice())
        {
            self.bits.clear();
            self.bits.extend_from_slice(bits);
            self.energy = energy;
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.offer(&other.bits, other.energy);
        self
    }
}

fn search_chunk(adj: &Adjacency, free: usize, high: usize, prefix: usize) -> Best {
    let n = adj.num_vars();
    let mut bits = vec![false; n];
    for b in 0..high {
        bits[free + b] = (prefix >> b) & 1 == 1;
    }
    let mut fields = adj.local_fields(&bits);
    let mut energy = adj.energy(&bits);
    let mut best = Best {
        bits: bits.clone(),
        energy,
    };
    for step in 1u64..(1u64 << free) {
        let k = step.trailing_zeros() as usize;
        energy += adj.flip(&mut bits, &mut fields, k);
        best.offer(&bits, energy);
    }
    best
}

/// Global minimum by enumeration of all `2^num_vars` bitstrings.
///
/// Ties (within `1e-9` relative) resolve to the lexicographically smallest
/// bitstring. The returned energy is re-evaluated exactly.
pub fn brute_force_qubo(qubo: &Qubo) -> Result<(Vec<bool>, f64)> {
    let n = qubo.num_vars;
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(Error::TooManyVariables {
            num_vars: n,
            limit: MAX_BRUTE_FORCE_VARS,
        });
    }
    let adj = qubo.adjacency();
    let high = n.min(CHUNK_BITS);
    let free = n - high;
    let best = (0..1usize << high)
        .into_par_iter()
        .map(|prefix| search_chunk(&adj, free, high, prefix))
        .reduce_with(Best::merge)
        .expect("at least one chunk");
    let energy = qubo.energy(&best.bits)?;
    Ok((best.bits, energy))
}
