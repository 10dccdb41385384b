//! Bin packing instances, the embedded benchmark suite, classical bounds and
//! the first-fit-decreasing heuristic.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One bin packing problem: integer item weights and a single bin capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    weights: Vec<u64>,
    capacity: u64,
}

impl Instance {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    /// Number of items.
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn min_weight(&self) -> u64 {
        // Non-empty by construction.
        *self.weights.iter().min().unwrap()
    }
}

/// Validates and builds an [`Instance`].
pub fn make_instance(name: impl Into<String>, weights: &[i64], capacity: i64) -> Result<Instance> {
    if capacity < 1 {
        return Err(Error::InvalidCapacity(capacity));
    }
    if weights.is_empty() {
        return Err(Error::EmptyInstance);
    }
    for (index, &weight) in weights.iter().enumerate() {
        if weight < 1 {
            return Err(Error::NonPositiveWeight { index, weight });
        }
        if weight > capacity {
            return Err(Error::ItemExceedsCapacity {
                index,
                weight,
                capacity,
            });
        }
    }
    Ok(Instance {
        name: name.into(),
        weights: weights.iter().map(|&w| w as u64).collect(),
        capacity: capacity as u64,
    })
}

/// Draws `n` weights uniformly from `[weight_lo, weight_hi]`.
///
/// The stream is ChaCha8 seeded from `seed`, one draw per item in order, so
/// the same arguments give the same instance on every platform. The instance
/// is named `"(n, seed)"`.
pub fn generate_instance(
    n: usize,
    weight_lo: i64,
    weight_hi: i64,
    capacity: i64,
    seed: u64,
) -> Result<Instance> {
    if weight_lo < 1 || weight_lo > weight_hi || weight_hi > capacity {
        return Err(Error::InvalidWeightRange {
            lo: weight_lo,
            hi: weight_hi,
            capacity,
        });
    }
    if n == 0 {
        return Err(Error::EmptyInstance);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<i64> = (0..n)
        .map(|_| rng.gen_range(weight_lo..=weight_hi))
        .collect();
    make_instance(format!("({n}, {seed})"), &weights, capacity)
}

/// A row of the published benchmark table.
#[derive(Debug, Clone, Copy)]
pub struct FixtureRow {
    pub seed: u64,
    pub weights: &'static [i64],
    /// Lower-bound column as printed. Disagrees with [`l1_lower_bound`] on a
    /// few rows; the computed bound is the one used everywhere else.
    pub table_lower_bound: u64,
}

impl FixtureRow {
    pub fn name(&self) -> String {
        format!("({}, {})", self.weights.len(), self.seed)
    }
}

pub const FIXTURE_CAPACITY: i64 = 10;

const fn row(seed: u64, weights: &'static [i64], table_lower_bound: u64) -> FixtureRow {
    FixtureRow {
        seed,
        weights,
        table_lower_bound,
    }
}

/// The 40 benchmark instances: five seeds, item counts 3 through 10,
/// capacity 10.
pub const FIXTURES: [FixtureRow; 40] = [
    row(23, &[4, 8, 6], 2),
    row(23, &[8, 5, 4, 8], 3),
    row(23, &[4, 4, 8, 8, 9], 3),
    row(23, &[7, 5, 5, 5, 4, 9], 4),
    row(23, &[9, 7, 8, 6, 9, 6, 7], 5),
    row(23, &[4, 5, 7, 5, 6, 4, 6, 4], 4),
    row(23, &[7, 6, 8, 4, 8, 4, 9, 6, 4], 6),
    row(23, &[5, 8, 6, 7, 10, 9, 4, 10, 7, 4], 7),
    row(42, &[4, 8, 6], 2),
    row(42, &[7, 7, 10, 4], 3),
    row(42, &[8, 5, 4, 7, 10], 4),
    row(42, &[9, 9, 9, 9, 7, 4], 5),
    row(42, &[9, 7, 7, 6, 5, 10, 9], 5),
    row(42, &[8, 6, 9, 7, 7, 7, 5, 4], 5),
    row(42, &[7, 10, 4, 10, 9, 5, 8, 5, 9], 7),
    row(42, &[8, 6, 4, 10, 7, 10, 8, 9, 9, 5], 7),
    row(123, &[4, 8, 8], 2),
    row(123, &[4, 10, 5, 5], 3),
    row(123, &[5, 6, 5, 6, 9], 3),
    row(123, &[7, 10, 7, 5, 9, 9], 5),
    row(123, &[10, 10, 4, 7, 5, 5, 5], 5),
    row(123, &[9, 9, 5, 6, 9, 5, 8, 7], 6),
    row(123, &[10, 9, 5, 9, 9, 5, 7, 9, 5], 7),
    row(123, &[5, 5, 4, 7, 4, 8, 6, 5, 6, 4], 5),
    row(90, &[8, 6, 4], 2),
    row(90, &[8, 5, 7, 6], 3),
    row(90, &[6, 7, 8, 7, 4], 3),
    row(90, &[7, 8, 9, 9, 10, 6], 5),
    row(90, &[6, 4, 4, 4, 8, 9, 6], 4),
    row(90, &[7, 10, 8, 8, 8, 5, 5, 8], 6),
    row(90, &[9, 6, 4, 10, 10, 5, 4, 4, 6], 6),
    row(90, &[9, 6, 8, 7, 8, 10, 9, 6, 9, 10], 8),
    row(510, &[5, 8, 6], 2),
    row(510, &[7, 9, 5, 5], 3),
    row(510, &[6, 10, 4, 9, 4], 3),
    row(510, &[5, 5, 9, 10, 8, 6], 4),
    row(510, &[9, 7, 9, 4, 10, 10, 8], 6),
    row(510, &[9, 10, 8, 9, 4, 4, 9, 5], 6),
    row(510, &[5, 9, 10, 9, 7, 8, 4, 10, 6], 7),
    row(510, &[10, 5, 9, 5, 8, 9, 7, 4, 6, 9], 7),
];

/// Returns the 40 benchmark instances in table order.
pub fn load_fixture_suite() -> Vec<Instance> {
    FIXTURES
        .iter()
        .map(|r| make_instance(r.name(), r.weights, FIXTURE_CAPACITY).expect("fixture is valid"))
        .collect()
}

/// Looks up a fixture by name, ignoring whitespace, so `"(7,42)"` and
/// `"(7, 42)"` both resolve.
pub fn fixture(name: &str) -> Option<Instance> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    FIXTURES
        .iter()
        .find(|r| r.name().replace(' ', "") == key)
        .map(|r| make_instance(r.name(), r.weights, FIXTURE_CAPACITY).expect("fixture is valid"))
}

/// Continuous lower bound `ceil(sum(w) / C)`.
pub fn l1_lower_bound(instance: &Instance) -> u64 {
    instance.total_weight().div_ceil(instance.capacity)
}

/// A packing: each inner list holds the item indices placed in one bin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub bins: Vec<Vec<usize>>,
}

impl Solution {
    pub fn num_bins(&self) -> usize {
        self.bins.iter().filter(|b| !b.is_empty()).count()
    }

    pub fn loads(&self, instance: &Instance) -> Vec<u64> {
        self.bins
            .iter()
            .map(|b| b.iter().map(|&j| instance.weights[j]).sum())
            .collect()
    }

    /// True when every item is placed exactly once and no bin overflows.
    pub fn is_valid(&self, instance: &Instance) -> bool {
        let mut seen = vec![false; instance.n()];
        for &j in self.bins.iter().flatten() {
            if j >= instance.n() || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        seen.iter().all(|&s| s) && self.loads(instance).iter().all(|&l| l <= instance.capacity)
    }
}

/// First-fit decreasing. Items are taken by weight descending, ties by index
/// ascending, and each goes into the first open bin with room.
pub fn first_fit_decreasing(instance: &Instance) -> Solution {
    let mut order: Vec<usize> = (0..instance.n()).collect();
    order.sort_by(|&a, &b| {
        instance.weights[b]
            .cmp(&instance.weights[a])
            .then(a.cmp(&b))
    });

    let mut bins: Vec<Vec<usize>> = Vec::new();
    let mut loads: Vec<u64> = Vec::new();
    for j in order {
        let w = instance.weights[j];
        match loads.iter().position(|&l| l + w <= instance.capacity) {
            Some(i) => {
                bins[i].push(j);
                loads[i] += w;
            }
            None => {
                bins.push(vec![j]);
                loads.push(w);
            }
        }
    }
    Solution { bins }
}

/// On-disk form of an instance. `lower_bound` is informational and ignored
/// on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub name: String,
    pub capacity: i64,
    pub weights: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<u64>,
}

impl From<&Instance> for InstanceRecord {
    fn from(instance: &Instance) -> Self {
        InstanceRecord {
            name: instance.name.clone(),
            capacity: instance.capacity as i64,
            weights: instance.weights.iter().map(|&w| w as i64).collect(),
            lower_bound: Some(l1_lower_bound(instance)),
        }
    }
}

impl InstanceRecord {
    pub fn to_instance(&self) -> Result<Instance> {
        make_instance(self.name.clone(), &self.weights, self.capacity)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum InstanceFile {
    One(InstanceRecord),
    Many(Vec<InstanceRecord>),
}

/// Writes a single instance as a JSON record.
pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&InstanceRecord::from(instance))
        .map_err(|e| Error::json(path, e))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Writes a suite as a JSON array of records.
pub fn save_suite(instances: &[Instance], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let records: Vec<InstanceRecord> = instances.iter().map(InstanceRecord::from).collect();
    let text = serde_json::to_string_pretty(&records).map_err(|e| Error::json(path, e))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Loads either a single record or an array of records.
pub fn load_instances(path: impl AsRef<Path>) -> Result<Vec<Instance>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: InstanceFile = serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
    match file {
        InstanceFile::One(r) => Ok(vec![r.to_instance()?]),
        InstanceFile::Many(rs) => rs.iter().map(InstanceRecord::to_instance).collect(),
    }
}
