use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::dynamics::AgentModel;
use crate::expm::expm;
use crate::{Error, Result};

/// `|ν_0|` at or below this makes the binomial system singular.
pub const UNMIX_TOL: f64 = 1e-12;

/// Moments `m_0, ..., m_{K-1}` of the spectral measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence(pub Vec<f64>);

impl MomentSequence {
    /// The moments.
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Lower-triangular `K x K` matrix with entry `(k, s) = C(k, s) ν_{k-s}`.
///
/// Binomial coefficients come from Pascal's recurrence in floating point,
/// exact through `k = 55`.
///
/// # Panics
///
/// If `nu` has fewer than `k` entries.
pub fn binomial_lower_triangular(nu: &[f64], k: usize) -> DMatrix<f64> {
    assert!(nu.len() >= k, "need {k} values of nu, got {}", nu.len());
    let mut out = DMatrix::zeros(k, k);
    let mut row = vec![1.0];
    for i in 0..k {
        for (s, &b) in row.iter().enumerate() {
            out[(i, s)] = b * nu[i - s];
        }
        row = next_pascal_row(&row);
    }
    out
}

fn next_pascal_row(row: &[f64]) -> Vec<f64> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(1.0);
    for w in row.windows(2) {
        next.push(w[0] + w[1]);
    }
    next.push(1.0);
    next
}

/// Inverts `y_k = Σ_s C(k, s) ν_{k-s} m_s` by forward substitution.
pub fn unmix_moments(values: &[f64], nu: &[f64]) -> Result<MomentSequence> {
    if values.len() != nu.len() {
        return Err(Error::DimensionMismatch {
            expected: values.len(),
            found: nu.len(),
        });
    }
    let nu0 = nu.first().copied().unwrap_or(0.0);
    if nu0.abs() <= UNMIX_TOL {
        return Err(Error::UnmixingSingular(nu0));
    }
    let mut m = Vec::with_capacity(values.len());
    let mut row = vec![1.0];
    for (k, &y) in values.iter().enumerate() {
        let mixed: f64 = (0..k).map(|s| row[s] * nu[k - s] * m[s]).sum();
        m.push((y - mixed) / nu0);
        row = next_pascal_row(&row);
    }
    Ok(MomentSequence(m))
}

/// `ν_j = γ^T A^j β` for `j < k`, by repeated matrix-vector products.
pub fn nu_sequence_dt(agent: &AgentModel, k: usize) -> Vec<f64> {
    propagate(agent, agent.a(), k)
}

/// `ν_k = γ^T E^k β` with `E = exp(Aτ)`.
pub fn nu_sequence_ct(agent: &AgentModel, tau: f64, k: usize) -> Result<Vec<f64>> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidInput("sampling period must be > 0".into()));
    }
    let e = expm(&(agent.a() * tau));
    Ok(propagate(agent, &e, k))
}

fn propagate(agent: &AgentModel, step: &DMatrix<f64>, k: usize) -> Vec<f64> {
    let gamma = DVector::from_column_slice(agent.gamma());
    let mut v = DVector::from_column_slice(agent.beta());
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(gamma.dot(&v));
        v = step * v;
    }
    out
}
