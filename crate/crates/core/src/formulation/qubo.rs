//! Sparse QUBO storage, evaluation, and file formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const INDEX_CONVENTION: &str = "y_i = i; x_ij = m + i*n + j";

/// Variable layout of a bin packing QUBO: `m` bin flags followed by the
/// `m x n` placement matrix in row-major order by bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub n: usize,
    pub m: usize,
}

impl Layout {
    pub fn new(n: usize, m: usize) -> Self {
        Layout { n, m }
    }

    pub fn num_vars(&self) -> usize {
        self.m * (self.n + 1)
    }

    pub fn y(&self, bin: usize) -> usize {
        debug_assert!(bin < self.m);
        bin
    }

    pub fn x(&self, bin: usize, item: usize) -> usize {
        debug_assert!(bin < self.m && item < self.n);
        self.m + bin * self.n + item
    }
}

/// Minimize `sum linear[i] b_i + sum_{i<j} quadratic[(i, j)] b_i b_j + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Qubo {
    pub num_vars: usize,
    pub linear: BTreeMap<usize, f64>,
    pub quadratic: BTreeMap<(usize, usize), f64>,
    pub offset: f64,
    pub layout: Option<Layout>,
}

impl Qubo {
    pub fn new(num_vars: usize) -> Self {
        Qubo {
            num_vars,
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
            offset: 0.0,
            layout: None,
        }
    }

    pub fn add_linear(&mut self, i: usize, value: f64) {
        assert!(i < self.num_vars, "variable {i} out of range");
        *self.linear.entry(i).or_insert(0.0) += value;
    }

    /// Adds to the coupling of an unordered pair. `i == j` folds into the
    /// linear term since `b * b = b`.
    pub fn add_quadratic(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            i < self.num_vars && j < self.num_vars,
            "pair ({i}, {j}) out of range"
        );
        if i == j {
            self.add_linear(i, value);
        } else {
            *self.quadratic.entry((i.min(j), i.max(j))).or_insert(0.0) += value;
        }
    }

    /// Drops entries whose merged coefficient is exactly zero.
    pub fn prune_zeros(&mut self) {
        self.linear.retain(|_, v| *v != 0.0);
        self.quadratic.retain(|_, v| *v != 0.0);
    }

    pub fn linear_coeff(&self, i: usize) -> f64 {
        self.linear.get(&i).copied().unwrap_or(0.0)
    }

    pub fn quadratic_coeff(&self, i: usize, j: usize) -> f64 {
        self.quadratic
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn energy(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: bits.len(),
            });
        }
        let mut e = self.offset;
        for (&i, &v) in &self.linear {
            if bits[i] {
                e += v;
            }
        }
        for (&(i, j), &v) in &self.quadratic {
            if bits[i] && bits[j] {
                e += v;
            }
        }
        Ok(e)
    }

    /// Adjacency-list view used by the samplers.
    pub fn adjacency(&self) -> Adjacency {
        let mut linear = vec![0.0; self.num_vars];
        for (&i, &v) in &self.linear {
            linear[i] = v;
        }
        let mut neighbors = vec![Vec::new(); self.num_vars];
        for (&(i, j), &v) in &self.quadratic {
            neighbors[i].push((j, v));
            neighbors[j].push((i, v));
        }
        Adjacency {
            linear,
            neighbors,
            offset: self.offset,
        }
    }
}

/// `sum linear[i] b_i + sum quadratic[(i, j)] b_i b_j + offset`.
pub fn qubo_energy(qubo: &Qubo, bits: &[bool]) -> Result<f64> {
    qubo.energy(bits)
}

/// Dense linear terms plus symmetric neighbor lists.
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub linear: Vec<f64>,
    pub neighbors: Vec<Vec<(usize, f64)>>,
    pub offset: f64,
}

impl Adjacency {
    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    /// Local fields `h_k = linear[k] + sum_j q_kj b_j`. Flipping bit `k`
    /// changes the energy by `(1 - 2 b_k) h_k`.
    pub fn local_fields(&self, bits: &[bool]) -> Vec<f64> {
        (0..self.num_vars())
            .map(|k| {
                self.linear[k]
                    + self.neighbors[k]
                        .iter()
                        .filter(|&&(j, _)| bits[j])
                        .map(|&(_, v)| v)
                        .sum::<f64>()
            })
            .collect()
    }

    pub fn energy(&self, bits: &[bool]) -> f64 {
        let mut e = self.offset;
        for k in 0..self.num_vars() {
            if bits[k] {
                e += self.linear[k];
                for &(j, v) in &self.neighbors[k] {
                    if j > k && bits[j] {
                        e += v;
                    }
                }
            }
        }
        e
    }

    /// Flips bit `k`, updating neighbor fields, and returns the energy change.
    #[inline]
    pub fn flip(&self, bits: &mut [bool], fields: &mut [f64], k: usize) -> f64 {
        let delta = if bits[k] { -fields[k] } else { fields[k] };
        let sign = if bits[k] { -1.0 } else { 1.0 };
        bits[k] = !bits[k];
        for &(j, v) in &self.neighbors[k] {
            fields[j] += sign * v;
        }
        delta
    }
}

/// Output format for [`export_qubo`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuboFormat {
    /// JSON document; re-imports bit-exactly.
    Structured,
    /// qbsolv-style `p qubo` text with 10 significant digits.
    SparseText,
}

#[derive(Serialize, Deserialize)]
struct QuboDocument {
    num_vars: usize,
    offset: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layout: Option<LayoutDocument>,
    linear: BTreeMap<usize, f64>,
    quadratic: Vec<(usize, usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct LayoutDocument {
    n: usize,
    m: usize,
    convention: String,
}

impl From<&Qubo> for QuboDocument {
    fn from(q: &Qubo) -> Self {
        QuboDocument {
            num_vars: q.num_vars,
            offset: q.offset,
            layout: q.layout.map(|l| LayoutDocument {
                n: l.n,
                m: l.m,
                convention: INDEX_CONVENTION.to_string(),
            }),
            linear: q.linear.clone(),
            quadratic: q.quadratic.iter().map(|(&(i, j), &v)| (i, j, v)).collect(),
        }
    }
}

impl TryFrom<QuboDocument> for Qubo {
    type Error = Error;

    fn try_from(doc: QuboDocument) -> Result<Qubo> {
        let mut q = Qubo::new(doc.num_vars);
        q.offset = doc.offset;
        if let Some(l) = doc.layout {
            if l.convention != INDEX_CONVENTION {
                return Err(Error::MalformedQubo(format!(
                    "unknown index convention {:?}",
                    l.convention
                )));
            }
            if l.m * (l.n + 1) != doc.num_vars {
                return Err(Error::MalformedQubo(format!(
                    "layout n={} m={} does not match {} variables",
                    l.n, l.m, doc.num_vars
                )));
            }
            q.layout = Some(Layout::new(l.n, l.m));
        }
        for (i, v) in doc.linear {
            if i >= q.num_vars {
                return Err(Error::MalformedQubo(format!(
                    "linear index {i} out of range"
                )));
            }
            q.linear.insert(i, v);
        }
        for (i, j, v) in doc.quadratic {
            if i >= j || j >= q.num_vars {
                return Err(Error::MalformedQubo(format!(
                    "bad quadratic pair ({i}, {j})"
                )));
            }
            if q.quadratic.insert((i, j), v).is_some() {
                return Err(Error::MalformedQubo(format!("duplicate pair ({i}, {j})")));
            }
        }
        Ok(q)
    }
}

/// Renders `v` as a plain decimal with exactly 10 significant digits.
pub fn format_sig10(v: f64) -> String {
    format_significant(v, 10)
}

/// Renders `v` as a plain (non-exponent) decimal with exactly `digits`
/// significant digits, trailing zeros kept.
pub fn format_significant(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if v == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // Exponent formatting rounds correctly; reshape its mantissa.
    let sci = format!("{:.*e}", digits - 1, v.abs());
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i64 = exp.parse().unwrap();
    let mant: String = mantissa.chars().filter(|c| *c != '.').collect();
    let last = digits as i64 - 1;
    let body = if exp >= last {
        format!("{mant}{}", "0".repeat((exp - last) as usize))
    } else if exp >= 0 {
        let (int, frac) = mant.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{mant}", "0".repeat((-exp - 1) as usize))
    };
    if v < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

/// [`format_significant`] with trailing fractional zeros removed.
pub fn format_significant_trimmed(v: f64, digits: usize) -> String {
    let s = format_significant(v, digits);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn to_structured_string(qubo: &Qubo) -> String {
    serde_json::to_string_pretty(&QuboDocument::from(qubo)).expect("QUBO serializes") + "\n"
}

pub fn to_sparse_text(qubo: &Qubo) -> String {
    let mut out = String::new();
    if let Some(l) = qubo.layout {
        writeln!(out, "c layout n={} m={} {}", l.n, l.m, INDEX_CONVENTION).unwrap();
    }
    writeln!(out, "c offset {}", format_sig10(qubo.offset)).unwrap();
    writeln!(
        out,
        "p qubo 0 {} {} {}",
        qubo.num_vars,
        qubo.linear.len(),
        qubo.quadratic.len()
    )
    .unwrap();
    for (&i, &v) in &qubo.linear {
        writeln!(out, "{i} {i} {}", format_sig10(v)).unwrap();
    }
    for (&(i, j), &v) in &qubo.quadratic {
        writeln!(out, "{i} {j} {}", format_sig10(v)).unwrap();
    }
    out
}

pub fn parse_structured(text: &str) -> Result<Qubo> {
    let doc: QuboDocument =
        serde_json::from_str(text).map_err(|e| Error::MalformedQubo(e.to_string()))?;
    Qubo::try_from(doc)
}

/// Parses `p qubo` text. Values carry only the precision that was written.
pub fn parse_sparse_text(text: &str) -> Result<Qubo> {
    let bad = |line: usize, msg: &str| Error::MalformedQubo(format!("line {}: {msg}", line + 1));
    let mut qubo: Option<Qubo> = None;
    let mut offset = 0.0;
    let mut layout = None;
    let mut expected = (0, 0);
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "c" => match fields.get(1).copied() {
                Some("offset") => {
                    offset = fields
                        .get(2)
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad(ln, "bad offset"))?;
                }
                Some("layout") => {
                    let get = |key: &str| {
                        fields
                            .iter()
                            .find_map(|f| f.strip_prefix(key)?.parse::<usize>().ok())
                    };
                    match (get("n="), get("m=")) {
                        (Some(n), Some(m)) => layout = Some(Layout::new(n, m)),
                        _ => return Err(bad(ln, "bad layout comment")),
                    }
                }
                _ => {}
            },
            "p" => {
                if fields.len() != 6 || fields[1] != "qubo" {
                    return Err(bad(ln, "expected `p qubo 0 <vars> <linear> <quadratic>`"));
                }
                let nums: Vec<usize> = fields[3..]
                    .iter()
                    .map(|s| s.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad(ln, "bad header count"))?;
                qubo = Some(Qubo::new(nums[0]));
                expected = (nums[1], nums[2]);
            }
            _ => {
                let q = qubo
                    .as_mut()
                    .ok_or_else(|| bad(ln, "entry before header"))?;
                if fields.len() != 3 {
                    return Err(bad(ln, "expected `i j value`"));
                }
                let i: usize = fields[0].parse().map_err(|_| bad(ln, "bad index"))?;
                let j: usize = fields[1].parse().map_err(|_| bad(ln, "bad index"))?;
                let v: f64 = fields[2].parse().map_err(|_| bad(ln, "bad value"))?;
                if i.max(j) >= q.num_vars {
                    return Err(bad(ln, "index out of range"));
                }
                if i == j {
                    q.linear.insert(i, v);
                } else {
                    q.quadratic.insert((i.min(j), i.max(j)), v);
                }
            }
        }
    }
    let mut q = qubo.ok_or_else(|| Error::MalformedQubo("missing `p qubo` header".into()))?;
    if (q.linear.len(), q.quadratic.len()) != expected {
        return Err(Error::MalformedQubo(format!(
            "header promises {expected:?} entries, found ({}, {})",
            q.linear.len(),
            q.quadratic.len()
        )));
    }
    if let Some(l) = layout {
        if l.num_vars() != q.num_vars {
            return Err(Error::MalformedQubo("layout does not match header".into()));
        }
    }
    q.offset = offset;
    q.layout = layout;
    Ok(q)
}

pub fn export_qubo(qubo: &Qubo, path: impl AsRef<Path>, format: QuboFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        QuboFormat::Structured => to_structured_string(qubo),
        QuboFormat::SparseText => to_sparse_text(qubo),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads either format; a leading `{` selects the structured one.
pub fn import_qubo(path: impl AsRef<Path>) -> Result<Qubo> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim_start().starts_with('{') {
        parse_structured(&text)
    } else {
        parse_sparse_text(&text)
    }
}
