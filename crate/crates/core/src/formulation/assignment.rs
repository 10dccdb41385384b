//! Decoded bin/item assignments and the feasibility checker.

use serde::{Deserialize, Serialize};

use super::qubo::Layout;
use crate::error::{Error, Result};
use crate::instances::{Instance, Solution};

/// Bin-open flags `y` and the `m x n` placement matrix `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub y: Vec<bool>,
    pub x: Vec<Vec<bool>>,
    pub bins_used: usize,
}

impl Assignment {
    /// Panics if the rows of `x` do not all have the same length or there is
    /// not one row per flag in `y`.
    pub fn new(y: Vec<bool>, x: Vec<Vec<bool>>) -> Self {
        assert_eq!(y.len(), x.len(), "one placement row per bin");
        if let Some(first) = x.first() {
            assert!(
                x.iter().all(|r| r.len() == first.len()),
                "ragged placement matrix"
            );
        }
        let bins_used = y.iter().filter(|&&b| b).count();
        Assignment { y, x, bins_used }
    }

    pub fn empty(layout: Layout) -> Self {
        Assignment::new(vec![false; layout.m], vec![vec![false; layout.n]; layout.m])
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.x.first().map_or(0, Vec::len), self.y.len())
    }

    /// Places a packing into the first `m` bins, opening exactly the
    /// non-empty ones.
    pub fn from_solution(solution: &Solution, n: usize, m: usize) -> Result<Self> {
        let used: Vec<&Vec<usize>> = solution.bins.iter().filter(|b| !b.is_empty()).collect();
        if used.len() > m {
            return Err(Error::InvalidBinCount);
        }
        let mut a = Assignment::empty(Layout::new(n, m));
        for (i, bin) in used.iter().enumerate() {
            a.y[i] = true;
            for &j in bin.iter() {
                a.x[i][j] = true;
            }
        }
        a.bins_used = used.len();
        Ok(a)
    }

    /// Item lists of the open bins.
    pub fn to_solution(&self) -> Solution {
        Solution {
            bins: self
                .x
                .iter()
                .zip(&self.y)
                .filter(|(_, &open)| open)
                .map(|(row, _)| (0..row.len()).filter(|&j| row[j]).collect())
                .collect(),
        }
    }

    /// Sum of placed weights per bin, open or not.
    pub fn loads(&self, instance: &Instance) -> Vec<u64> {
        self.x
            .iter()
            .map(|row| {
                row.iter()
                    .zip(instance.weights())
                    .filter(|(&p, _)| p)
                    .map(|(_, &w)| w)
                    .sum()
            })
            .collect()
    }
}

/// Splits a bitstring into `y` and `x` following the layout.
pub fn decode(bits: &[bool], layout: Layout) -> Result<Assignment> {
    if bits.len() != layout.num_vars() {
        return Err(Error::LengthMismatch {
            expected: layout.num_vars(),
            got: bits.len(),
        });
    }
    let y = bits[..layout.m].to_vec();
    let x = (0..layout.m)
        .map(|i| (0..layout.n).map(|j| bits[layout.x(i, j)]).collect())
        .collect();
    Ok(Assignment::new(y, x))
}

/// Inverse of [`decode`].
pub fn encode(assignment: &Assignment) -> Vec<bool> {
    let mut bits = assignment.y.clone();
    for row in &assignment.x {
        bits.extend_from_slice(row);
    }
    bits
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemViolation {
    pub item: usize,
    pub placements: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityViolation {
    pub bin: usize,
    pub load: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Items not placed exactly once.
    pub item_violations: Vec<ItemViolation>,
    /// Bins whose load exceeds `C * y_i`.
    pub capacity_violations: Vec<CapacityViolation>,
    /// Closed bins holding items.
    pub ghost_items: Vec<usize>,
}

pub fn check_feasibility(instance: &Instance, assignment: &Assignment) -> FeasibilityReport {
    let n = instance.n();
    let item_violations = (0..n)
        .filter_map(|j| {
            let placements = assignment.x.iter().filter(|row| row[j]).count();
            (placements != 1).then_some(ItemViolation {
                item: j,
                placements,
            })
        })
        .collect::<Vec<_>>();

    let loads = assignment.loads(instance);
    let capacity_violations = loads
        .iter()
        .zip(&assignment.y)
        .enumerate()
        .filter(|(_, (&load, &open))| load > if open { instance.capacity() } else { 0 })
        .map(|(bin, (&load, _))| CapacityViolation { bin, load })
        .collect::<Vec<_>>();

    let ghost_items = assignment
        .x
        .iter()
        .zip(&assignment.y)
        .enumerate()
        .filter(|(_, (row, &open))| !open && row.iter().any(|&p| p))
        .map(|(bin, _)| bin)
        .collect::<Vec<_>>();

    FeasibilityReport {
        feasible: item_violations.is_empty()
            && capacity_violations.is_empty()
            && ghost_items.is_empty(),
        item_violations,
        capacity_violations,
        ghost_items,
    }
}
