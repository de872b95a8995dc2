//! Ground truth: spectral weights, the recoverable support, and
//! estimate-vs-truth matching.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::dynamics::ObservationSpec;
use crate::eigen::SpectrumDecomposition;
use crate::graph::SystemMatrix;
use crate::recovery::SpectralEstimate;
use crate::{Error, Result};

/// Eigenvalues within this distance are treated as one repeated eigenvalue.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-9;

/// Default relative weight threshold for [`support_set`].
pub const DEFAULT_WEIGHT_TOL: f64 = 1e-9;

/// A point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    /// Location (an eigenvalue).
    pub value: f64,
    /// Signed mass.
    pub weight: f64,
}

/// `μ = Σ ω_i δ(z - λ_i)` with `ω_i = [c^T U]_i [W x0]_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    /// One atom per eigenvalue, ascending.
    pub atoms: Vec<Atom>,
    /// Repeated eigenvalues merged, weights summed.
    pub grouped: Vec<Atom>,
}

impl SpectralMeasure {
    /// `m_k = Σ ω_i λ_i^k`.
    pub fn moment(&self, k: usize) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.weight * a.value.powi(k as i32))
            .sum()
    }

    /// `Σ ω_i (e^{-λ_i τ})^k`, the moment of the sampled continuous-time measure.
    pub fn ct_moment(&self, k: usize, tau: f64) -> f64 {
        let t = k as f64 * tau;
        self.atoms
            .iter()
            .map(|a| a.weight * (-a.value * t).exp())
            .sum()
    }

    /// `Σ ω_i`, which equals `c^T x0`.
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

/// Index ranges of ascending `values` whose consecutive gaps are within `tol`.
fn clusters(values: &[f64], tol: f64) -> Vec<core::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Computes the spectral measure of `(c, x0)` against a reference
/// decomposition, grouping eigenvalues within [`EIGEN_CLUSTER_TOL`].
pub fn spectral_weights(
    dec: &SpectrumDecomposition,
    obs: &ObservationSpec,
) -> Result<SpectralMeasure> {
    spectral_weights_grouped(dec, obs, EIGEN_CLUSTER_TOL)
}

/// [`spectral_weights`] with an explicit grouping tolerance.
pub fn spectral_weights_grouped(
    dec: &SpectrumDecomposition,
    obs: &ObservationSpec,
    cluster_tol: f64,
) -> Result<SpectralMeasure> {
    let n = dec.dim();
    for v in [&obs.c, &obs.x0] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    let cu = dec.right.tr_mul(&DVector::from_column_slice(&obs.c));
    let wx = &dec.left * DVector::from_column_slice(&obs.x0);
    let atoms: Vec<Atom> = (0..n)
        .map(|i| Atom {
            value: dec.eigenvalues[i],
            weight: cu[i] * wx[i],
        })
        .collect();
    let grouped = clusters(&dec.eigenvalues, cluster_tol)
        .into_iter()
        .map(|r| {
            let run = &atoms[r];
            Atom {
                value: run.iter().map(|a| a.value).sum::<f64>() / run.len() as f64,
                weight: run.iter().map(|a| a.weight).sum(),
            }
        })
        .collect();
    Ok(SpectralMeasure { atoms, grouped })
}

/// Distinct eigenvalues carrying nonzero aggregate weight.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SupportSet {
    /// Ascending.
    pub values: Vec<f64>,
}

impl SupportSet {
    /// Number of support points.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when nothing is observable.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Keeps grouped atoms with `|weight| > weight_tol · max |weight|`.
pub fn support_set(measure: &SpectralMeasure, weight_tol: f64) -> SupportSet {
    let top = measure
        .grouped
        .iter()
        .map(|a| a.weight.abs())
        .fold(0.0, f64::max);
    let values = if top == 0.0 {
        Vec::new()
    } else {
        measure
            .grouped
            .iter()
            .filter(|a| a.weight.abs() > weight_tol * top)
            .map(|a| a.value)
            .collect()
    };
    SupportSet { values }
}

/// Distinct eigenvalues whose eigenspace is not orthogonal to `c`, by the
/// weight form of the PBH test: some right eigenvector in the cluster has
/// `|c^T u| > tol · ‖c‖ ‖u‖`.
pub fn pbh_observable(dec: &SpectrumDecomposition, c: &[f64], tol: f64) -> Result<Vec<f64>> {
    let n = dec.dim();
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let c = DVector::from_column_slice(c);
    let cn = c.norm();
    if cn == 0.0 {
        return Ok(Vec::new());
    }
    let visible = |j: usize| {
        let u = dec.right.column(j);
        c.dot(&u).abs() > tol * cn * u.norm()
    };
    Ok(clusters(&dec.eigenvalues, EIGEN_CLUSTER_TOL)
        .into_iter()
        .filter(|r| r.clone().any(visible))
        .map(|r| dec.eigenvalues[r.clone()].iter().sum::<f64>() / r.len() as f64)
        .collect())
}

/// Rank form of the PBH test: `λ` is observable through `c` iff
/// `[λI - M; c^T]` has full column rank, read with a relative threshold.
///
/// Stricter than [`pbh_observable`] for repeated eigenvalues: a single output
/// never observes a multi-dimensional eigenspace completely.
pub fn pbh_rank_observable(m: &SystemMatrix, c: &[f64], lambda: f64, rel_tol: f64) -> Result<bool> {
    let n = m.dim();
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let cn = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if cn == 0.0 {
        return Ok(false);
    }
    let stacked = DMatrix::from_fn(n + 1, n, |i, j| {
        if i < n {
            let d = if i == j { lambda } else { 0.0 };
            d - m.matrix()[(i, j)]
        } else {
            c[j] / cn
        }
    });
    // eigenvalues of [[0, S], [S^T, 0]] are ±σ_i plus |rows - cols| zeros
    let aug = DMatrix::from_fn(2 * n + 1, 2 * n + 1, |i, j| match (i < n + 1, j < n + 1) {
        (true, false) => stacked[(i, j - n - 1)],
        (false, true) => stacked[(j, i - n - 1)],
        _ => 0.0,
    });
    let scale = m.matrix().norm().max(1.0);
    let above = SymmetricEigen::new(aug)
        .eigenvalues
        .iter()
        .filter(|&&s| s > rel_tol * scale)
        .count();
    Ok(above == n)
}

/// A truth value paired with its estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MatchedPair {
    /// True eigenvalue.
    pub truth: f64,
    /// Estimated eigenvalue.
    pub estimate: f64,
    /// `|truth - estimate|`.
    pub error: f64,
}

/// Result of matching estimated eigenvalues against the truth.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MatchReport {
    /// Matched pairs, ascending.
    pub pairs: Vec<MatchedPair>,
    /// Truth values with no estimate within tolerance.
    pub unmatched_truth: Vec<f64>,
    /// Estimates with no truth value within tolerance.
    pub unmatched_estimate: Vec<f64>,
    /// Largest pair error, 0 when nothing matched.
    pub max_error: f64,
}

impl MatchReport {
    /// Every truth value and every estimate was matched.
    pub fn is_exact(&self) -> bool {
        self.unmatched_truth.is_empty() && self.unmatched_estimate.is_empty()
    }

    /// Mean pair error, 0 when nothing matched.
    pub fn mean_error(&self) -> f64 {
        if self.pairs.is_empty() {
            0.0
        } else {
            self.pairs.iter().map(|p| p.error).sum::<f64>() / self.pairs.len() as f64
        }
    }
}

/// Greedy in-order matching of two value lists (sorted internally).
pub fn match_values(truth: &[f64], estimate: &[f64], match_tol: f64) -> MatchReport {
    let mut t = truth.to_vec();
    let mut e = estimate.to_vec();
    t.sort_by(f64::total_cmp);
    e.sort_by(f64::total_cmp);
    let mut report = MatchReport {
        pairs: Vec::new(),
        unmatched_truth: Vec::new(),
        unmatched_estimate: Vec::new(),
        max_error: 0.0,
    };
    let (mut i, mut j) = (0, 0);
    while i < t.len() && j < e.len() {
        let err = (t[i] - e[j]).abs();
        if err <= match_tol {
            report.pairs.push(MatchedPair {
                truth: t[i],
                estimate: e[j],
                error: err,
            });
            report.max_error = report.max_error.max(err);
            i += 1;
            j += 1;
        } else if t[i] < e[j] {
            report.unmatched_truth.push(t[i]);
            i += 1;
        } else {
            report.unmatched_estimate.push(e[j]);
            j += 1;
        }
    }
    report.unmatched_truth.extend_from_slice(&t[i..]);
    report.unmatched_estimate.extend_from_slice(&e[j..]);
    report
}

/// Matches an estimate's eigenvalues against a support set.
pub fn match_spectra(truth: &SupportSet, est: &SpectralEstimate, match_tol: f64) -> MatchReport {
    match_values(&truth.values, &est.eigenvalues, match_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eig_reference;
    use crate::graph::{build_graph, generate_ring, laplacian, LaplacianKind};
    use alloc::vec;

    fn obs(c: &[f64], x0: &[f64]) -> ObservationSpec {
        ObservationSpec {
            c: c.to_vec(),
            x0: x0.to_vec(),
        }
    }

    #[test]
    fn p2_weights() {
        let g = build_graph(2, &[(0, 1)]).unwrap();
        let dec =
            eig_reference(&laplacian(&g, LaplacianKind::NormalizedRandomWalk).unwrap()).unwrap();
        let mu = spectral_weights(&dec, &obs(&[1.0, 0.0], &[1.0, 0.0])).unwrap();
        assert!((mu.atoms[0].value + 1.0).abs() < 1e-14);
        for a in &mu.atoms {
            assert!((a.weight - 0.5).abs() < 1e-14);
        }
        let s = support_set(&mu, DEFAULT_WEIGHT_TOL);
        assert_eq!(s.len(), 2);
        let zero = spectral_weights(&dec, &obs(&[0.0, 0.0], &[1.0, 0.0])).unwrap();
        assert!(zero.atoms.iter().all(|a| a.weight == 0.0));
        assert!(support_set(&zero, DEFAULT_WEIGHT_TOL).is_empty());
    }

    #[test]
    fn symmetric_same_vector_weights_nonnegative() {
        let g = generate_ring(8).unwrap();
        let dec = eig_reference(&laplacian(&g, LaplacianKind::Combinatorial).unwrap()).unwrap();
        let v = [0.3, -0.2, 0.9, 0.1, 0.5, -0.7, 0.2, 0.4];
        let mu = spectral_weights(&dec, &obs(&v, &v)).unwrap();
        assert!(mu.grouped.iter().all(|a| a.weight >= -1e-15));
        assert!((mu.total_weight() - v.iter().map(|x| x * x).sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn ring_support_excludes_projected_eigenspace() {
        let g = generate_ring(12).unwrap();
        let dec = eig_reference(&laplacian(&g, LaplacianKind::Combinatorial).unwrap()).unwrap();
        let mut x0: Vec<f64> = (0..12).map(|i| 0.1 + 0.05 * i as f64).collect();
        // remove both λ = 1 eigenvectors (U orthonormal here)
        for j in 0..12 {
            if (dec.eigenvalues[j] - 1.0).abs() < 1e-9 {
                let u = dec.right.column(j);
                let p: f64 = u.iter().zip(&x0).map(|(a, b)| a * b).sum();
                for (xi, ui) in x0.iter_mut().zip(u.iter()) {
                    *xi -= p * ui;
                }
            }
        }
        let mut c = vec![0.0; 12];
        c[0] = 1.0;
        c[1] = 1.0;
        c[3] = 1.0;
        let s = support_set(
            &spectral_weights(&dec, &obs(&c, &x0)).unwrap(),
            DEFAULT_WEIGHT_TOL,
        );
        assert_eq!(s.len(), 6);
        assert!(s.values.iter().all(|v| (v - 1.0).abs() > 1e-6));
    }

    #[test]
    fn pbh_forms_agree_on_ring() {
        // c = e0 + e4 + e8 only sees Fourier modes k ≡ 0 mod 3: λ ∈ {0, 2, 4}
        let g = generate_ring(12).unwrap();
        let m = laplacian(&g, LaplacianKind::Combinatorial).unwrap();
        let dec = eig_reference(&m).unwrap();
        let mut c = vec![0.0; 12];
        c[0] = 1.0;
        c[4] = 1.0;
        c[8] = 1.0;
        let seen = pbh_observable(&dec, &c, 1e-9).unwrap();
        assert_eq!(seen.len(), 3);
        for (s, w) in seen.iter().zip([0.0, 2.0, 4.0]) {
            assert!((s - w).abs() < 1e-9);
        }
        for lam in [0.0, 4.0] {
            assert!(pbh_rank_observable(&m, &c, lam, 1e-8).unwrap());
        }
        // 2 is a double eigenvalue; one output row cannot see its whole eigenspace
        for lam in [1.0, 2.0, 3.0, 2.0 - 3f64.sqrt()] {
            assert!(!pbh_rank_observable(&m, &c, lam, 1e-8).unwrap());
        }
    }

    #[test]
    fn matching() {
        let r = match_values(&[0.0, 1.0, 2.0], &[1e-9, 1.0 - 1e-9, 2.0], 1e-6);
        assert_eq!(r.pairs.len(), 3);
        assert!(r.max_error <= 1e-9);
        assert!(r.is_exact());
        let r = match_values(&[0.0, 1.0], &[0.0], 1e-6);
        assert_eq!(r.unmatched_truth, [1.0]);
        let r = match_values(&[0.0], &[0.5, 0.0], 1e-6);
        assert_eq!(r.unmatched_estimate, [0.5]);
        assert_eq!(r.pairs.len(), 1);
        let r = match_values(&[1.0], &[], 1e-6);
        assert_eq!(r.max_error, 0.0);
        assert_eq!(r.unmatched_truth, [1.0]);
    }

    #[test]
    fn dimension_mismatch() {
        let g = generate_ring(3).unwrap();
        let dec = eig_reference(&laplacian(&g, LaplacianKind::Combinatorial).unwrap()).unwrap();
        assert!(matches!(
            spectral_weights(&dec, &obs(&[1.0], &[1.0, 2.0, 3.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
