//! Reference eigendecomposition `M = U diag(λ) W`, `W = U^-1`.
//!
//! This is the ground-truth side of every comparison. Both Laplacian kinds
//! are routed through a symmetric eigenproblem so the spectrum comes out real:
//! the combinatorial Laplacian is symmetric already, and `D^-1 G` is similar
//! to `D^-1/2 G D^-1/2`.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::graph::{LaplacianKind, SystemMatrix};
use crate::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-10;

/// Eigenvalues sorted ascending with right eigenvectors (columns of `U`) and
/// left eigenvectors (rows of `W`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDecomposition {
    /// `λ_1 <= ... <= λ_n`.
    pub eigenvalues: Vec<f64>,
    /// `U`, one right eigenvector per column.
    pub right: DMatrix<f64>,
    /// `W = U^-1`, one left eigenvector per row.
    pub left: DMatrix<f64>,
}

impl SpectrumDecomposition {
    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Computes the reference eigendecomposition and checks its residuals.
pub fn eig_reference(m: &SystemMatrix) -> Result<SpectrumDecomposition> {
    let n = m.dim();
    let (values, right, left) = match m.kind() {
        LaplacianKind::Combinatorial => {
            let eig = SymmetricEigen::new(m.matrix().clone());
            let v = eig.eigenvectors;
            (eig.eigenvalues, v.clone(), v.transpose())
        }
        LaplacianKind::NormalizedRandomWalk => {
            let sq: Vec<f64> = m.degrees().iter().map(|d| d.sqrt()).collect();
            // D^1/2 (D^-1 G) D^-1/2 = D^-1/2 G D^-1/2
            let mut s = DMatrix::from_fn(n, n, |i, j| sq[i] * m.matrix()[(i, j)] / sq[j]);
            s = (&s + s.transpose()) * 0.5;
            let eig = SymmetricEigen::new(s);
            let v = eig.eigenvectors;
            let u = DMatrix::from_fn(n, n, |i, j| v[(i, j)] / sq[i]);
            let w = DMatrix::from_fn(n, n, |i, j| v[(j, i)] * sq[j]);
            (eig.eigenvalues, u, w)
        }
    };
    let dec = canonical_order(values, right, left);
    check_residuals(m.matrix(), &dec)?;
    Ok(dec)
}

/// Sorts ascending, flips each eigenpair so the first nonzero entry of the
/// right vector is positive, and orders exact ties lexicographically.
fn canonical_order(
    values: DVector<f64>,
    mut right: DMatrix<f64>,
    mut left: DMatrix<f64>,
) -> SpectrumDecomposition {
    let n = values.len();
    for j in 0..n {
        let scale = right.column(j).amax();
        let lead = right
            .column(j)
            .iter()
            .copied()
            .find(|x| x.abs() > 1e-12 * scale)
            .unwrap_or(0.0);
        if lead < 0.0 {
            right.column_mut(j).neg_mut();
            left.row_mut(j).neg_mut();
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[a].total_cmp(&values[b]).then_with(|| {
            right
                .column(a)
                .iter()
                .zip(right.column(b).iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    });
    SpectrumDecomposition {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        right: DMatrix::from_fn(n, n, |i, j| right[(i, order[j])]),
        left: DMatrix::from_fn(n, n, |i, j| left[(order[i], j)]),
    }
}

fn check_residuals(m: &DMatrix<f64>, dec: &SpectrumDecomposition) -> Result<()> {
    let n = dec.dim();
    let norm = m.norm();
    for (i, &lambda) in dec.eigenvalues.iter().enumerate() {
        let u = dec.right.column(i);
        let r = (m * u - u * lambda).norm();
        if r > RESIDUAL_TOL * norm.max(1.0) {
            return Err(Error::NumericalFailure(format!(
                "eigenpair {i} residual {r:e} exceeds tolerance"
            )));
        }
    }
    let defect = (&dec.left * &dec.right - DMatrix::<f64>::identity(n, n)).norm();
    if defect > RESIDUAL_TOL {
        return Err(Error::NumericalFailure(format!(
            "left/right eigenvector defect {defect:e} exceeds tolerance"
        )));
    }
    Ok(())
}
