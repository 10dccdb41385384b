//! QUBO construction for the augmented Lagrangian bin packing model, plus a
//! literal term-by-term evaluator used to check it.
//!
//! The energy of a configuration `(y, x)` with per-bin loads
//! `s_i = sum_j w_j x_ij` is
//!
//! ```text
//!   delta * sum_i y_i
//! + sum_i lambda_i (s_i - c_i y_i)
//! + sum_i rho_i (s_i - c_i y_i)^2
//! + theta * sum_j (sum_i x_ij - 1)^2
//! + gamma * sum_i (1 - y_i) sum_j x_ij
//! ```
//!
//! The item term is a plain squared penalty with no linear multiplier, so an
//! unplaced item is never rewarded. Expanding with `b^2 = b` gives:
//!
//! | term                 | coefficient                             |
//! |----------------------|-----------------------------------------|
//! | `y_i`                | `delta - lambda_i c_i + rho_i c_i^2`    |
//! | `x_ij`               | `lambda_i w_j + rho_i w_j^2 - theta + gamma` |
//! | `x_ij x_ik`, `j != k`| `2 rho_i w_j w_k`                       |
//! | `x_ij x_i'j`, `i != i'` | `2 theta`                            |
//! | `y_i x_ij`           | `-2 rho_i c_i w_j - gamma`              |
//! | constant             | `n theta`                               |

use super::assignment::Assignment;
use super::penalties::Penalties;
use super::qubo::{Layout, Qubo};
use crate::error::{Error, Result};
use crate::instances::Instance;

fn check_sizes(penalties: &Penalties, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidBinCount);
    }
    if penalties.lambda.len() != m || penalties.rho.len() != m {
        return Err(Error::PenaltySizeMismatch {
            expected: m,
            got: penalties.lambda.len().min(penalties.rho.len()),
        });
    }
    Ok(())
}

/// Builds the `m (n + 1)`-variable QUBO. Every bin gets the instance
/// capacity as its `c_i`.
pub fn build_qubo(instance: &Instance, penalties: &Penalties, m: usize) -> Result<Qubo> {
    check_sizes(penalties, m)?;
    let capacities = vec![instance.capacity() as f64; m];
    Ok(build_with_capacities(instance, penalties, &capacities))
}

/// Per-bin capacity variant of [`build_qubo`].
pub fn build_with_capacities(
    instance: &Instance,
    penalties: &Penalties,
    capacities: &[f64],
) -> Qubo {
    let n = instance.n();
    let m = capacities.len();
    let layout = Layout::new(n, m);
    let w: Vec<f64> = instance.weights().iter().map(|&w| w as f64).collect();
    let (theta, gamma) = (penalties.theta, penalties.gamma);

    let mut q = Qubo::new(layout.num_vars());
    q.layout = Some(layout);

    for (i, &c) in capacities.iter().enumerate() {
        let (lambda, rho) = (penalties.lambda[i], penalties.rho[i]);
        let y = layout.y(i);

        q.add_linear(y, penalties.delta - lambda * c + rho * c * c);
        for j in 0..n {
            let xij = layout.x(i, j);
            q.add_linear(xij, lambda * w[j] + rho * w[j] * w[j] - theta + gamma);
            q.add_quadratic(y, xij, -2.0 * rho * c * w[j] - gamma);
            for k in (j + 1)..n {
                q.add_quadratic(xij, layout.x(i, k), 2.0 * rho * w[j] * w[k]);
            }
            for other in (i + 1)..m {
                q.add_quadratic(xij, layout.x(other, j), 2.0 * theta);
            }
        }
    }
    q.offset = n as f64 * theta;
    // Diagonal entries stay even when zero so every variable is listed.
    q.quadratic.retain(|_, v| *v != 0.0);
    q
}

/// Evaluates the model energy term by term, without any expansion.
pub fn direct_energy(instance: &Instance, penalties: &Penalties, assignment: &Assignment) -> f64 {
    let c = instance.capacity() as f64;
    let loads = assignment.loads(instance);
    let mut e = 0.0;
    for (i, &open) in assignment.y.iter().enumerate() {
        let y = if open { 1.0 } else { 0.0 };
        let slack = loads[i] as f64 - c * y;
        e += penalties.delta * y;
        e += penalties.lambda[i] * slack;
        e += penalties.rho[i] * slack * slack;
        let placed = assignment.x[i].iter().filter(|&&p| p).count() as f64;
        e += penalties.gamma * (1.0 - y) * placed;
    }
    for j in 0..instance.n() {
        let p = assignment.x.iter().filter(|row| row[j]).count() as f64 - 1.0;
        e += penalties.theta * p * p;
    }
    e
}
