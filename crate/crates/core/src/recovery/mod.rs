//! The estimator.
//!
//! A series of moments `m_k = Σ ω_i z_i^k` has a Hankel matrix whose rank is
//! the number of distinct atoms `z_i` carrying nonzero aggregate weight. Once
//! that rank `r` is known, the atoms are the roots of the monic degree-`r`
//! polynomial whose coefficients solve an `r x r` Hankel system built from
//! the first `2r` moments.
//!
//! * Discrete-time integrators: the outputs are the moments and the atoms
//!   are eigenvalues of the system matrix.
//! * Sampled continuous-time integrators: the atoms are `e^{-λτ}`, mapped back
//!   by [`ct_log_transform`].
//! * Identical-agent networks: the agent contribution is removed first, by
//!   binomial forward substitution in discrete time or by elementwise division
//!   in continuous time.
//!
//! The estimator reads only sample values and the time domain, never the
//! network size.

mod hankel;
mod prony;
mod roots;
mod unmix;

use alloc::vec::Vec;

pub use hankel::{build_hankel, numerical_rank, HankelMatrix, RankInfo};
pub use prony::{prony_coefficients, PronySolution};
pub use roots::polynomial_roots;
pub use unmix::{
    binomial_lower_triangular, nu_sequence_ct, nu_sequence_dt, unmix_moments, MomentSequence,
    UNMIX_TOL,
};

use crate::dynamics::{AgentModel, MeasurementSeries, TimeDomain};
use crate::{Error, Result};

/// Every numerical knob of the estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct RecoveryOptions {
    /// Relative singular-value threshold for Hankel rank and the Prony
    /// pseudo-inverse.
    pub rel_tol: f64,
    /// Largest `|Im z| / max(1, |Re z|)` projected onto the real axis.
    pub imag_tol: f64,
    /// Roots closer than this are merged.
    pub cluster_tol: f64,
    /// Continuous-time roots at or below this cannot be log-transformed.
    pub pos_tol: f64,
    /// `|ν_k|` at or below this is treated as zero.
    pub unmix_tol: f64,
    /// Read the rank from the largest Hankel the data allows instead of
    /// stopping once the rank stops growing.
    pub force_full: bool,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions {
            rel_tol: 1e-8,
            imag_tol: 1e-6,
            cluster_tol: 1e-8,
            pos_tol: 1e-12,
            unmix_tol: UNMIX_TOL,
            force_full: false,
        }
    }
}

impl RecoveryOptions {
    /// Checks that every tolerance is in range.
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.rel_tol < 1.0
            && self.imag_tol >= 0.0
            && self.cluster_tol >= 0.0
            && self.pos_tol >= 0.0
            && self.unmix_tol >= 0.0;
        if !ok {
            return Err(Error::InvalidInput("tolerance out of range".into()));
        }
        Ok(())
    }
}

/// Output of a recovery run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralEstimate {
    /// Rank `r` used for the Prony solve.
    pub rank: usize,
    /// `α_0, ..., α_{r-1}`.
    pub alpha: Vec<f64>,
    /// Recovered atoms, ascending (eigenvalues in discrete time, `e^{-λτ}`
    /// in continuous time), after merging near-duplicates.
    pub roots: Vec<f64>,
    /// Recovered eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// `max |p(root)|` over the reported roots.
    pub residual: f64,
    /// Singular values of the `r x r` Prony system, descending.
    pub singular_values: Vec<f64>,
    /// How many leading samples the estimator read.
    pub samples_consumed: usize,
}

impl SpectralEstimate {
    /// The estimate of a series with nothing observable.
    pub fn empty() -> Self {
        SpectralEstimate {
            rank: 0,
            alpha: Vec::new(),
            roots: Vec::new(),
            eigenvalues: Vec::new(),
            residual: 0.0,
            singular_values: Vec::new(),
            samples_consumed: 0,
        }
    }
}

/// Rank read by the growth rule, with the number of samples it looked at.
fn detect_rank(values: &[f64], opts: &RecoveryOptions) -> Result<(usize, usize)> {
    let k_max = values.len().div_ceil(2);
    if opts.force_full {
        let h = build_hankel(values, k_max)?;
        return Ok((numerical_rank(&h, opts.rel_tol).rank, values.len()));
    }
    let mut rank = 0;
    let mut used = 0;
    for k in 1..=k_max {
        let rk = numerical_rank(&build_hankel(values, k)?, opts.rel_tol).rank;
        used = 2 * k - 1;
        // a zero leading block says nothing yet; keep growing until a mode shows up
        if rank > 0 && rk <= rank {
            break;
        }
        rank = rank.max(rk);
    }
    Ok((rank, used))
}

/// Merges runs of ascending roots whose consecutive gaps are within `tol`.
fn cluster_roots(sorted: &[f64], tol: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] - sorted[j - 1] <= tol {
            j += 1;
        }
        let run = &sorted[i..j];
        out.push(run.iter().sum::<f64>() / run.len() as f64);
        i = j;
    }
    out
}

/// Rank detection, Prony solve with retry, rooting. Shared by every pipeline.
fn recover_atoms(values: &[f64], opts: &RecoveryOptions) -> Result<SpectralEstimate> {
    opts.validate()?;
    if values.is_empty() {
        return Err(Error::InsufficientData {
            needed: 1,
            available: 0,
        });
    }
    let (mut r, used) = detect_rank(values, opts)?;
    let solution = loop {
        if r == 0 {
            return Err(Error::EmptySupport);
        }
        if 2 * r > values.len() {
            r -= 1;
            continue;
        }
        match prony_coefficients(values, r, opts.rel_tol) {
            Ok(s) => break s,
            Err(Error::RankDeficientSystem { .. }) => r -= 1,
            Err(e) => return Err(e),
        }
    };
    let roots = cluster_roots(
        &polynomial_roots(&solution.alpha, opts.imag_tol)?,
        opts.cluster_tol,
    );
    let residual = roots
        .iter()
        .map(|&z| roots::eval_monic(&solution.alpha, z).abs())
        .fold(0.0, f64::max);
    Ok(SpectralEstimate {
        rank: r,
        eigenvalues: roots.clone(),
        roots,
        alpha: solution.alpha,
        residual,
        singular_values: solution.singular_values,
        samples_consumed: used.max(2 * r),
    })
}

/// Recovers the observable eigenvalues of a discrete-time integrator network.
///
/// Hankel matrices grow `1 x 1, 2 x 2, ...` over the leading samples until the
/// rank stops increasing (or data runs out); see [`RecoveryOptions::force_full`].
pub fn recover_dt_spectrum(
    series: &MeasurementSeries,
    opts: &RecoveryOptions,
) -> Result<SpectralEstimate> {
    if series.domain() != TimeDomain::Dt {
        return Err(Error::WrongDomain("discrete-time"));
    }
    recover_atoms(series.values(), opts)
}

/// `λ_i = -ln(z_i) / τ`.
pub fn ct_log_transform(roots: &[f64], tau: f64, pos_tol: f64) -> Result<Vec<f64>> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidInput("sampling period must be > 0".into()));
    }
    roots
        .iter()
        .map(|&z| {
            if z <= pos_tol {
                Err(Error::NonpositiveRoot(z))
            } else {
                Ok(-z.ln() / tau)
            }
        })
        .collect()
}

fn finish_ct(
    mut est: SpectralEstimate,
    tau: f64,
    opts: &RecoveryOptions,
) -> Result<SpectralEstimate> {
    let mut lambda = ct_log_transform(&est.roots, tau, opts.pos_tol)?;
    lambda.sort_by(f64::total_cmp);
    est.eigenvalues = lambda;
    Ok(est)
}

/// Recovers the observable eigenvalues of a sampled continuous-time
/// integrator network.
pub fn recover_ct_spectrum(
    series: &MeasurementSeries,
    opts: &RecoveryOptions,
) -> Result<SpectralEstimate> {
    let TimeDomain::Ct { tau } = series.domain() else {
        return Err(Error::WrongDomain("continuous-time"));
    };
    finish_ct(recover_atoms(series.values(), opts)?, tau, opts)
}

/// Recovers the observable Laplacian eigenvalues of an identical-agent
/// network with known agent model.
pub fn recover_network_spectrum(
    series: &MeasurementSeries,
    agent: &AgentModel,
    opts: &RecoveryOptions,
) -> Result<SpectralEstimate> {
    let nu0 = agent.gamma_dot_beta();
    if nu0.abs() <= opts.unmix_tol {
        return Err(Error::UnmixingSingular(nu0));
    }
    let y = series.values();
    match series.domain() {
        TimeDomain::Dt => {
            let nu = nu_sequence_dt(agent, y.len());
            let m = unmix_moments(y, &nu)?;
            recover_atoms(m.values(), opts)
        }
        TimeDomain::Ct { tau } => {
            let nu = nu_sequence_ct(agent, tau, y.len())?;
            if let Some((k, &value)) = nu
                .iter()
                .enumerate()
                .find(|(_, v)| v.abs() <= opts.unmix_tol)
            {
                return Err(Error::NuVanishes { k, value });
            }
            let m: Vec<f64> = y.iter().zip(&nu).map(|(y, n)| y / n).collect();
            finish_ct(recover_atoms(&m, opts)?, tau, opts)
        }
    }
}
