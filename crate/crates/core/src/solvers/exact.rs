//! Exact bin packing by depth-first branch-and-bound.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::instances::{first_fit_decreasing, l1_lower_bound, Instance, Solution};

pub const MAX_EXACT_ITEMS: usize = 20;

struct Search<'a> {
    capacity: u64,
    /// Weights in branching order (non-increasing).
    weights: Vec<u64>,
    /// `suffix[k]` = total weight of items `k..`.
    suffix: Vec<u64>,
    order: Vec<usize>,
    lower: usize,
    best: usize,
    best_assign: Option<Vec<usize>>,
    loads: Vec<u64>,
    assign: Vec<usize>,
    instance: &'a Instance,
}

impl Search<'_> {
    fn residual_bound(&self, k: usize) -> usize {
        let free: u64 = self.loads.iter().map(|&l| self.capacity - l).sum();
        let overflow = self.suffix[k].saturating_sub(free);
        self.loads.len() + overflow.div_ceil(self.capacity) as usize
    }

    fn dfs(&mut self, k: usize) {
        if self.best == self.lower {
            return;
        }
        if k == self.weights.len() {
            if self.loads.len() < self.best {
                self.best = self.loads.len();
                self.best_assign = Some(self.assign.clone());
            }
            return;
        }
        if self.residual_bound(k) >= self.best {
            return;
        }
        let w = self.weights[k];
        for b in 0..self.loads.len() {
            let load = self.loads[b];
            // Bins with equal load are interchangeable for the remaining items.
            if load + w > self.capacity || self.loads[..b].contains(&load) {
                continue;
            }
            self.loads[b] += w;
            self.assign[k] = b;
            self.dfs(k + 1);
            self.loads[b] -= w;
        }
        // Only the next unopened bin may be opened.
        if self.loads.len() + 1 < self.best {
            self.loads.push(w);
            self.assign[k] = self.loads.len() - 1;
            self.dfs(k + 1);
            self.loads.pop();
        }
    }

    fn solution(&self) -> Option<Solution> {
        let assign = self.best_assign.as_ref()?;
        let mut bins = vec![Vec::new(); self.best];
        for (k, &b) in assign.iter().enumerate() {
            bins[b].push(self.order[k]);
        }
        for bin in &mut bins {
            bin.sort_unstable();
        }
        debug_assert!(Solution { bins: bins.clone() }.is_valid(self.instance));
        Some(Solution { bins })
    }
}

/// Provably optimal packing and the solve time in microseconds.
///
/// Items are branched in decreasing weight order. The incumbent starts from
/// first-fit decreasing and nodes are pruned with the continuous bound on the
/// items still to place.
pub fn solve_exact_bpp(instance: &Instance) -> Result<(Solution, f64)> {
    let n = instance.n();
    if n > MAX_EXACT_ITEMS {
        return Err(Error::InstanceTooLarge {
            n,
            limit: MAX_EXACT_ITEMS,
        });
    }
    let start = Instant::now();
    let ffd = first_fit_decreasing(instance);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        instance.weights()[b]
            .cmp(&instance.weights()[a])
            .then(a.cmp(&b))
    });
    let weights: Vec<u64> = order.iter().map(|&j| instance.weights()[j]).collect();
    let mut suffix = vec![0u64; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] + weights[k];
    }

    let mut search = Search {
        capacity: instance.capacity(),
        weights,
        suffix,
        order,
        lower: l1_lower_bound(instance) as usize,
        best: ffd.num_bins(),
        best_assign: None,
        loads: Vec::with_capacity(n),
        assign: vec![0; n],
        instance,
    };
    search.dfs(0);
    let solution = search.solution().unwrap_or(ffd);
    Ok((solution, start.elapsed().as_secs_f64() * 1e6))
}
