//! Experiment configuration, a single JSON document.

use std::path::PathBuf;

use lapspec::nalgebra::DMatrix;
use lapspec::oracle::{DEFAULT_WEIGHT_TOL, EIGEN_CLUSTER_TOL};
use lapspec::{AgentModel, LaplacianKind, ObservationMode, RecoveryOptions};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    Ring {
        n: usize,
    },
    PreferentialAttachment {
        n: usize,
        #[serde(default = "one")]
        m: usize,
        #[serde(default)]
        seed: u64,
    },
    File {
        path: PathBuf,
    },
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Dynamics {
    DtIntegrator,
    DtNetwork,
    CtIntegrator,
    CtNetwork,
}

impl Dynamics {
    pub fn is_ct(self) -> bool {
        matches!(self, Dynamics::CtIntegrator | Dynamics::CtNetwork)
    }

    pub fn is_network(self) -> bool {
        matches!(self, Dynamics::DtNetwork | Dynamics::CtNetwork)
    }

    pub fn name(self) -> &'static str {
        match self {
            Dynamics::DtIntegrator => "dt-integrator",
            Dynamics::DtNetwork => "dt-network",
            Dynamics::CtIntegrator => "ct-integrator",
            Dynamics::CtNetwork => "ct-network",
        }
    }
}

/// Identical-agent model `(A, β, γ)`; `a` is given row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub a: Vec<Vec<f64>>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl AgentSpec {
    pub fn scalar(a: f64) -> Self {
        AgentSpec {
            a: vec![vec![a]],
            beta: vec![1.0],
            gamma: vec![1.0],
        }
    }

    pub fn model(&self) -> Result<AgentModel> {
        let d = self.a.len();
        if self.a.iter().any(|row| row.len() != d) {
            return Err(CliError::Config("agent matrix must be square".into()));
        }
        let a = DMatrix::from_fn(d, d, |i, j| self.a[i][j]);
        AgentModel::new(a, self.beta.clone(), self.gamma.clone())
            .map_err(|e| CliError::Config(format!("agent model: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationConfig {
    pub mode: ObservationMode,
    #[serde(default)]
    pub seed: u64,
}

/// Every threshold that can change a result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative singular-value threshold for Hankel rank and Prony.
    pub rank_rel_tol: f64,
    /// Largest estimate-to-truth distance counted as a match.
    pub match_tol: f64,
    /// Largest relative imaginary part accepted on a root.
    pub imag_tol: f64,
    /// Recovered roots closer than this are merged.
    pub root_cluster_tol: f64,
    /// Continuous-time roots at or below this are rejected.
    pub pos_tol: f64,
    /// Smallest usable `|ν_k|` when unmixing.
    pub unmix_tol: f64,
    /// Relative weight below which an eigenvalue is outside the support.
    pub weight_tol: f64,
    /// Reference eigenvalues closer than this count as one.
    pub eigen_cluster_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let r = RecoveryOptions::default();
        Tolerances {
            rank_rel_tol: r.rel_tol,
            match_tol: 1e-6,
            imag_tol: r.imag_tol,
            root_cluster_tol: r.cluster_tol,
            pos_tol: r.pos_tol,
            unmix_tol: r.unmix_tol,
            weight_tol: DEFAULT_WEIGHT_TOL,
            eigen_cluster_tol: EIGEN_CLUSTER_TOL,
        }
    }
}

impl Tolerances {
    pub fn recovery_options(&self, force_full: bool) -> RecoveryOptions {
        RecoveryOptions {
            rel_tol: self.rank_rel_tol,
            imag_tol: self.imag_tol,
            cluster_tol: self.root_cluster_tol,
            pos_tol: self.pos_tol,
            unmix_tol: self.unmix_tol,
            force_full,
        }
    }

    fn validate(&self) -> Result<()> {
        self.recovery_options(false)
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        for (name, v) in [
            ("match_tol", self.match_tol),
            ("weight_tol", self.weight_tol),
            ("eigen_cluster_tol", self.eigen_cluster_tol),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub topology: Topology,
    pub dynamics: Dynamics,
    pub laplacian: LaplacianKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent: Option<AgentSpec>,
    pub observation: ObservationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Defaults to `2n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub force_full: bool,
    /// Artifacts are written here when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Checks everything that can be checked without building the graph.
    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.dynamics.is_ct() {
            match self.tau {
                Some(t) if t > 0.0 && t.is_finite() => {}
                Some(t) => return Err(CliError::Config(format!("tau must be > 0, got {t}"))),
                None => {
                    return Err(CliError::Config(format!(
                        "{} dynamics need tau",
                        self.dynamics.name()
                    )))
                }
            }
            if self.laplacian != LaplacianKind::Combinatorial {
                return Err(CliError::Config(
                    "continuous-time dynamics use the combinatorial Laplacian".into(),
                ));
            }
        }
        if self.dynamics.is_network() {
            let Some(agent) = &self.agent else {
                return Err(CliError::Config(format!(
                    "{} dynamics need an agent model",
                    self.dynamics.name()
                )));
            };
            let gb = agent.model()?.gamma_dot_beta();
            if gb.abs() <= self.tolerances.unmix_tol {
                return Err(CliError::Config(format!(
                    "agent has gamma^T beta = {gb:e}; moments cannot be unmixed"
                )));
            }
        }
        if self.samples == Some(0) {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        Ok(())
    }

    /// Node count when it is known without reading a file.
    pub fn declared_node_count(&self) -> Option<usize> {
        match self.topology {
            Topology::Ring { n } | Topology::PreferentialAttachment { n, .. } => Some(n),
            Topology::File { .. } => None,
        }
    }

    /// The same experiment with `seed` driving every random choice.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut cfg = self.clone();
        cfg.observation.seed = seed;
        if let Topology::PreferentialAttachment { seed: s, .. } = &mut cfg.topology {
            *s = seed;
        }
        cfg
    }

    /// Built-in configurations of the two reference experiments.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            // preferential-attachment tree, random-walk dynamics, one observed agent;
            // seed 114 draws a tree whose ten eigenvalues are all distinct
            "pa10" => Some(ExperimentConfig {
                topology: Topology::PreferentialAttachment {
                    n: 10,
                    m: 1,
                    seed: 114,
                },
                dynamics: Dynamics::DtIntegrator,
                laplacian: LaplacianKind::NormalizedRandomWalk,
                agent: None,
                observation: ObservationConfig {
                    mode: ObservationMode::SingleAgent(0),
                    seed: 114,
                },
                tau: None,
                samples: Some(20),
                tolerances: Tolerances::default(),
                force_full: false,
                output: None,
            }),
            // 12-ring, sampled continuous time, three observed agents
            "ring12" => Some(ExperimentConfig {
                topology: Topology::Ring { n: 12 },
                dynamics: Dynamics::CtIntegrator,
                laplacian: LaplacianKind::Combinatorial,
                agent: None,
                observation: ObservationConfig {
                    mode: ObservationMode::Subset(vec![(0, 1.0), (1, 1.0), (3, 1.0)]),
                    seed: 1,
                },
                tau: Some(1.0),
                samples: None,
                tolerances: Tolerances::default(),
                force_full: false,
                output: None,
            }),
            _ => None,
        }
    }
}
