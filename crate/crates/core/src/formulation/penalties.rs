//! Closed-form penalty multipliers.
//!
//! For bin `i` with capacity `c` and smallest item weight `w`, the capacity
//! pair `(lambda, rho)` is the least restrictive solution of
//!
//! ```text
//!   w * lambda + w^2 * rho          = 1   (overfilling by w costs one bin)
//!   -(c/2) * lambda + (c^2/4) * rho = 0   (a half-full bin earns no reward)
//! ```
//!
//! giving `lambda = c / (w (2w + c))` and `rho = 2 / (w (2w + c))`.
//! `theta = 2` and `gamma = 1` sit at the bottom of their admissible ranges,
//! and `delta` is a fraction of the cheapest possible overfill
//! `lambda * s_min + rho * s_min^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::Instance;

pub const DEFAULT_DELTA_FRACTION: f64 = 0.9;
pub const DEFAULT_THETA: f64 = 2.0;
pub const DEFAULT_GAMMA: f64 = 1.0;
pub const DEFAULT_S_MIN: u64 = 1;

/// Multipliers for the objective and the four penalty families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Penalties {
    pub delta: f64,
    pub lambda: Vec<f64>,
    pub rho: Vec<f64>,
    pub theta: f64,
    pub gamma: f64,
    pub s_min: u64,
}

impl Penalties {
    /// Bin count the multipliers were sized for.
    pub fn bins(&self) -> usize {
        self.lambda.len()
    }

    /// Lists every calibration condition that does not hold.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.lambda.len() != self.rho.len() {
            out.push(format!(
                "lambda has {} entries, rho has {}",
                self.lambda.len(),
                self.rho.len()
            ));
        }
        if self.theta < 2.0 {
            out.push(format!("theta = {} < 2", self.theta));
        }
        if self.gamma < 1.0 {
            out.push(format!("gamma = {} < 1", self.gamma));
        }
        if self.delta < 0.0 {
            out.push(format!("delta = {} < 0", self.delta));
        }
        let s = self.s_min as f64;
        for (i, (&l, &r)) in self.lambda.iter().zip(&self.rho).enumerate() {
            if l < 0.0 || r < 0.0 {
                out.push(format!("bin {i}: negative multiplier"));
            }
            if self.delta > l * s + r * s * s {
                out.push(format!(
                    "bin {i}: delta = {} exceeds overfill cost {}",
                    self.delta,
                    l * s + r * s * s
                ));
            }
        }
        out
    }

    pub fn is_calibrated(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Knobs for [`estimate_penalties_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub delta_fraction: f64,
    pub theta: f64,
    pub gamma: f64,
    pub s_min: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            delta_fraction: DEFAULT_DELTA_FRACTION,
            theta: DEFAULT_THETA,
            gamma: DEFAULT_GAMMA,
            s_min: DEFAULT_S_MIN,
        }
    }
}

/// `lambda` for one bin.
pub fn lambda_for(capacity: f64, w_min: f64) -> f64 {
    capacity / (w_min * (2.0 * w_min + capacity))
}

/// `rho` for one bin.
pub fn rho_for(capacity: f64, w_min: f64) -> f64 {
    2.0 / (w_min * (2.0 * w_min + capacity))
}

/// Estimates multipliers for an `m`-bin model of `instance` with the default
/// `theta`, `gamma` and `s_min`.
pub fn estimate_penalties(instance: &Instance, m: usize, delta_fraction: f64) -> Result<Penalties> {
    estimate_penalties_with(
        instance,
        m,
        EstimateOptions {
            delta_fraction,
            ..EstimateOptions::default()
        },
    )
}

/// Estimates multipliers with explicit options. Out-of-range options are
/// clamped so the result always satisfies [`Penalties::is_calibrated`].
pub fn estimate_penalties_with(
    instance: &Instance,
    m: usize,
    opts: EstimateOptions,
) -> Result<Penalties> {
    if m == 0 {
        return Err(Error::InvalidBinCount);
    }
    let w_min = instance.min_weight() as f64;
    let capacities = vec![instance.capacity() as f64; m];
    let lambda: Vec<f64> = capacities.iter().map(|&c| lambda_for(c, w_min)).collect();
    let rho: Vec<f64> = capacities.iter().map(|&c| rho_for(c, w_min)).collect();

    let s_min = opts.s_min.max(1);
    let s = s_min as f64;
    let overfill = lambda
        .iter()
        .zip(&rho)
        .map(|(&l, &r)| l * s + r * s * s)
        .fold(f64::INFINITY, f64::min);
    let fraction = if opts.delta_fraction.is_finite() {
        opts.delta_fraction.clamp(0.0, 1.0)
    } else {
        DEFAULT_DELTA_FRACTION
    };

    Ok(Penalties {
        delta: fraction * overfill,
        lambda,
        rho,
        theta: opts.theta.max(DEFAULT_THETA),
        gamma: opts.gamma.max(DEFAULT_GAMMA),
        s_min,
    })
}
