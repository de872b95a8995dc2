//! Black-box output generators for the four system classes: discrete or
//! continuous time, single integrators or identical `d`-dimensional agents.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::eig_reference;
use crate::graph::{LaplacianKind, SystemMatrix};
use crate::recovery::{nu_sequence_ct, UNMIX_TOL};
use crate::{Error, Result};

/// Output functional `c` and initial condition `x0`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ObservationSpec {
    /// Output functional, `y = c^T x`.
    pub c: Vec<f64>,
    /// Initial state.
    pub x0: Vec<f64>,
}

impl ObservationSpec {
    fn check(&self, n: usize) -> Result<()> {
        check_len(&self.c, n)?;
        check_len(&self.x0, n)
    }
}

fn check_len(v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(())
}

/// Which agents the output functional reads.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ObservationMode {
    /// `c = e_i`.
    SingleAgent(usize),
    /// `c = Σ w_i e_i` over the listed `(agent, weight)` pairs. An empty
    /// list gives `c = 0`.
    Subset(Vec<(usize, f64)>),
}

/// Draws `x0 ~ Uniform[0, 1)^n` from `seed` and builds `c` from `mode`.
pub fn random_observation(n: usize, seed: u64, mode: &ObservationMode) -> Result<ObservationSpec> {
    let mut c = vec![0.0; n];
    match mode {
        ObservationMode::SingleAgent(i) => {
            if *i >= n {
                return Err(Error::InvalidInput(format!(
                    "agent {i} out of range for {n} nodes"
                )));
            }
            c[*i] = 1.0;
        }
        ObservationMode::Subset(list) => {
            for &(i, w) in list {
                if i >= n {
                    return Err(Error::InvalidInput(format!(
                        "agent {i} out of range for {n} nodes"
                    )));
                }
                c[i] += w;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = (0..n).map(|_| rng.random::<f64>()).collect();
    Ok(ObservationSpec { c, x0 })
}

/// Per-agent dynamics for identical-agent networks.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentModel {
    a: DMatrix<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
}

impl AgentModel {
    /// Validates `A` (`d x d`), `beta` and `gamma` (length `d`), all finite.
    pub fn new(a: DMatrix<f64>, beta: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        let d = a.nrows();
        if d == 0 || !a.is_square() {
            return Err(Error::InvalidInput(format!(
                "agent matrix must be square with d >= 1, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        check_len(&beta, d)?;
        check_len(&gamma, d)?;
        if a.iter().chain(&beta).chain(&gamma).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(
                "agent model has non-finite entries".into(),
            ));
        }
        Ok(AgentModel { a, beta, gamma })
    }

    /// The scalar agent `A = [a]`, `beta = gamma = [1]`.
    pub fn scalar(a: f64) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, a), vec![1.0], vec![1.0])
    }

    /// `A`.
    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// Initial direction.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Output direction.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Agent state dimension `d`.
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `nu_0 = gamma^T beta`.
    pub fn gamma_dot_beta(&self) -> f64 {
        self.gamma.iter().zip(&self.beta).map(|(g, b)| g * b).sum()
    }
}

/// Discrete or sampled-continuous time.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "domain", rename_all = "snake_case"))]
pub enum TimeDomain {
    /// `y[k]`, `k = 0, 1, ...`.
    Dt,
    /// `y(kτ)` sampled with period `tau > 0`.
    Ct {
        /// Sampling period.
        tau: f64,
    },
}

/// Provenance carried alongside a series. The estimator never reads it.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeriesMeta {
    /// Network size, when known to the generator.
    pub node_count: Option<usize>,
    /// Seed of the observation draw.
    pub seed: Option<u64>,
    /// Free-form generator description.
    pub generator: Option<String>,
    /// Set when the agent model has `gamma^T beta = 0`, so moments cannot
    /// be unmixed from this series.
    pub unmixing_singular: bool,
}

/// Ordered scalar outputs `y[0..K-1]` with their time domain.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MeasurementSeries {
    values: Vec<f64>,
    domain: TimeDomain,
    meta: SeriesMeta,
}

impl MeasurementSeries {
    /// Validates `K >= 1` and, for continuous time, a finite `tau > 0`.
    pub fn new(values: Vec<f64>, domain: TimeDomain) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput(
                "series must have at least one sample".into(),
            ));
        }
        if let TimeDomain::Ct { tau } = domain {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "sampling period must be > 0, got {tau}"
                )));
            }
        }
        Ok(MeasurementSeries {
            values,
            domain,
            meta: SeriesMeta::default(),
        })
    }

    /// Attaches provenance.
    pub fn with_meta(mut self, meta: SeriesMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Samples.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Time domain.
    pub fn domain(&self) -> TimeDomain {
        self.domain
    }

    /// Provenance.
    pub fn meta(&self) -> &SeriesMeta {
        &self.meta
    }

    /// `K`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a series has at least one sample.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First `k` samples as a new series with the same domain and metadata.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        let k = k.min(self.values.len());
        Ok(Self::new(self.values[..k].to_vec(), self.domain)?.with_meta(self.meta.clone()))
    }
}

fn check_samples(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "sampling period must be > 0, got {tau}"
        )));
    }
    Ok(())
}

fn meta_for(n: usize, generator: &str) -> SeriesMeta {
    SeriesMeta {
        node_count: Some(n),
        generator: Some(generator.into()),
        ..SeriesMeta::default()
    }
}

/// `y[k] = c^T M^k x0` by repeated matrix-vector products.
pub fn simulate_dt_integrator(
    m: &SystemMatrix,
    obs: &ObservationSpec,
    samples: usize,
) -> Result<MeasurementSeries> {
    let n = m.dim();
    obs.check(n)?;
    check_samples(samples)?;
    let c = DVector::from_column_slice(&obs.c);
    let mut x = DVector::from_column_slice(&obs.x0);
    let mut y = Vec::with_capacity(samples);
    for _ in 0..samples {
        y.push(c.dot(&x));
        x = m.matrix() * x;
    }
    Ok(MeasurementSeries::new(y, TimeDomain::Dt)?.with_meta(meta_for(n, "dt-integrator")))
}

/// `y[k] = (c⊗γ)^T (I_n⊗A + M⊗I_d)^k (x0⊗β)` with the `nd x nd` Kronecker
/// sum materialized once.
pub fn simulate_dt_network(
    m: &SystemMatrix,
    agent: &AgentModel,
    c: &[f64],
    x0: &[f64],
    samples: usize,
) -> Result<MeasurementSeries> {
    let n = m.dim();
    check_len(c, n)?;
    check_len(x0, n)?;
    check_samples(samples)?;
    let d = agent.dim();
    let big = DMatrix::<f64>::identity(n, n).kronecker(agent.a())
        + m.matrix().kronecker(&DMatrix::<f64>::identity(d, d));
    let out = DVector::from_column_slice(c).kronecker(&DVector::from_column_slice(agent.gamma()));
    let mut x = DVector::from_column_slice(x0).kronecker(&DVector::from_column_slice(agent.beta()));
    let mut y = Vec::with_capacity(samples);
    for _ in 0..samples {
        y.push(out.dot(&x));
        x = &big * x;
    }
    let mut meta = meta_for(n, "dt-network");
    meta.unmixing_singular = agent.gamma_dot_beta().abs() <= UNMIX_TOL;
    Ok(MeasurementSeries::new(y, TimeDomain::Dt)?.with_meta(meta))
}

/// Modal coefficients `[c^T U]_i [W x0]_i` and eigenvalues of a
/// combinatorial Laplacian.
fn ct_modes(m: &SystemMatrix, obs: &ObservationSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    if m.kind() != LaplacianKind::Combinatorial {
        return Err(Error::WrongKind("combinatorial"));
    }
    obs.check(m.dim())?;
    let dec = eig_reference(m)?;
    let cu = dec.right.tr_mul(&DVector::from_column_slice(&obs.c));
    let wx = &dec.left * DVector::from_column_slice(&obs.x0);
    let weights = cu.iter().zip(wx.iter()).map(|(a, b)| a * b).collect();
    Ok((dec.eigenvalues, weights))
}

fn ct_sample(eigenvalues: &[f64], weights: &[f64], k: usize, tau: f64) -> f64 {
    let t = k as f64 * tau;
    eigenvalues
        .iter()
        .zip(weights)
        .map(|(l, w)| w * (-l * t).exp())
        .sum()
}

/// `y_k = c^T U e^{-Λkτ} W x0` for the combinatorial Laplacian, from one
/// eigendecomposition.
pub fn simulate_ct_integrator(
    m: &SystemMatrix,
    obs: &ObservationSpec,
    tau: f64,
    samples: usize,
) -> Result<MeasurementSeries> {
    check_tau(tau)?;
    check_samples(samples)?;
    let (lambda, w) = ct_modes(m, obs)?;
    let y = (0..samples)
        .map(|k| ct_sample(&lambda, &w, k, tau))
        .collect();
    Ok(MeasurementSeries::new(y, TimeDomain::Ct { tau })?
        .with_meta(meta_for(m.dim(), "ct-integrator")))
}

/// `y_k = (c^T U e^{-Λkτ} W x0)(γ^T e^{Akτ} β)`.
pub fn simulate_ct_network(
    m: &SystemMatrix,
    agent: &AgentModel,
    c: &[f64],
    x0: &[f64],
    tau: f64,
    samples: usize,
) -> Result<MeasurementSeries> {
    check_tau(tau)?;
    check_samples(samples)?;
    let obs = ObservationSpec {
        c: c.to_vec(),
        x0: x0.to_vec(),
    };
    let (lambda, w) = ct_modes(m, &obs)?;
    let nu = nu_sequence_ct(agent, tau, samples)?;
    let y = (0..samples)
        .map(|k| ct_sample(&lambda, &w, k, tau) * nu[k])
        .collect();
    let mut meta = meta_for(m.dim(), "ct-network");
    meta.unmixing_singular = agent.gamma_dot_beta().abs() <= UNMIX_TOL;
    Ok(MeasurementSeries::new(y, TimeDomain::Ct { tau })?.with_meta(meta))
}
