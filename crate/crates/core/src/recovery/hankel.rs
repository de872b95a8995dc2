use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result};

/// `k x k` matrix with entry `(i, j) = y[i + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    entries: DMatrix<f64>,
}

impl HankelMatrix {
    /// `k`.
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// The dense entries.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// Builds the `k x k` Hankel matrix from the first `2k - 1` values.
pub fn build_hankel(values: &[f64], k: usize) -> Result<HankelMatrix> {
    if k == 0 {
        return Err(Error::InvalidInput("Hankel size must be at least 1".into()));
    }
    let needed = 2 * k - 1;
    if values.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            available: values.len(),
        });
    }
    Ok(HankelMatrix {
        entries: DMatrix::from_fn(k, k, |i, j| values[i + j]),
    })
}

/// Numerical rank with the singular values it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct RankInfo {
    /// Count of `σ_i > rel_tol · σ_1`; 0 when `σ_1 = 0`.
    pub rank: usize,
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
}

/// Singular values of a symmetric matrix are `|λ_i|`; the symmetric
/// eigensolver is far more reliable here than the general SVD.
pub(crate) fn symmetric_eigen(m: &DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    SymmetricEigen::new(m.clone())
}

pub(crate) fn singular_values_desc(m: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = symmetric_eigen(m)
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub(crate) fn count_above(sv: &[f64], rel_tol: f64) -> usize {
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > rel_tol * top).count(),
        _ => 0,
    }
}

/// Rank of `h` read from its singular values with a relative threshold.
pub fn numerical_rank(h: &HankelMatrix, rel_tol: f64) -> RankInfo {
    let singular_values = singular_values_desc(&h.entries);
    RankInfo {
        rank: count_above(&singular_values, rel_tol),
        singular_values,
    }
}
