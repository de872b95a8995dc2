use alloc::vec::Vec;

use nalgebra::DVector;

use super::hankel::{build_hankel, count_above, symmetric_eigen};
use crate::{Error, Result};

/// Coefficients of the monic polynomial `x^r + α_{r-1} x^{r-1} + ... + α_0`
/// together with the singular values of the `r x r` system.
#[derive(Debug, Clone, PartialEq)]
pub struct PronySolution {
    /// `α_0, ..., α_{r-1}`.
    pub alpha: Vec<f64>,
    /// Singular values of `H_r`, descending.
    pub singular_values: Vec<f64>,
}

/// Solves `H_r α = -(y[r], ..., y[2r-1])` through the pseudo-inverse
/// `Q Λ⁺ Qᵀ` of the symmetric eigendecomposition `H_r = Q Λ Qᵀ`.
///
/// Fails with [`Error::RankDeficientSystem`] when fewer than `r` singular
/// values clear `rel_tol · σ_1`; the caller is expected to retry with `r - 1`.
pub fn prony_coefficients(values: &[f64], r: usize, rel_tol: f64) -> Result<PronySolution> {
    if r == 0 {
        return Err(Error::InvalidInput("Prony order must be at least 1".into()));
    }
    if values.len() < 2 * r {
        return Err(Error::InsufficientData {
            needed: 2 * r,
            available: values.len(),
        });
    }
    let h = build_hankel(values, r)?;
    let rhs = DVector::from_fn(r, |i, _| -values[r + i]);
    let eig = symmetric_eigen(h.matrix());
    let mut sorted: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs()).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let effective = count_above(&sorted, rel_tol);
    if effective < r {
        return Err(Error::RankDeficientSystem { size: r, effective });
    }
    let threshold = rel_tol * sorted[0];
    let q = &eig.eigenvectors;
    let mut coeffs = q.tr_mul(&rhs);
    for (c, &l) in coeffs.iter_mut().zip(eig.eigenvalues.iter()) {
        *c = if l.abs() > threshold { *c / l } else { 0.0 };
    }
    let alpha = q * coeffs;
    Ok(PronySolution {
        alpha: alpha.iter().copied().collect(),
        singular_values: sorted,
    })
}
