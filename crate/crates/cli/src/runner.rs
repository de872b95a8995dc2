//! End-to-end experiments: generate, simulate, recover, compare.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use lapspec::{
    eig_reference, generate_preferential_attachment, generate_ring, laplacian, match_spectra,
    random_observation, recover_ct_spectrum, recover_dt_spectrum, recover_network_spectrum,
    simulate_ct_integrator, simulate_ct_network, simulate_dt_integrator, simulate_dt_network,
    spectral_weights_grouped, support_set, Error, Graph, MatchReport, MeasurementSeries,
    SpectralEstimate,
};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::config::{Dynamics, ExperimentConfig, Topology};
use crate::error::{CliError, Result, Stage};
use crate::graph_file::{read_graph, write_graph};
use crate::measurements::{write_series, write_trace_csv};
use crate::reports::{write_eigencompare_csv, write_json, write_match_csv, MatchSummary};

/// Reference spectrum of the system matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Truth {
    /// All eigenvalues, ascending, with repeats.
    pub eigenvalues: Vec<f64>,
    /// Distinct eigenvalues visible through the observation.
    pub support: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    /// The configuration with `samples` filled in.
    pub config: ExperimentConfig,
    #[serde(skip)]
    pub graph: Graph,
    pub series: MeasurementSeries,
    pub estimate: SpectralEstimate,
    /// The estimator found nothing observable.
    pub empty_support: bool,
    pub truth: Truth,
    #[serde(serialize_with = "as_summary")]
    pub report: MatchReport,
    #[serde(rename = "elapsed_seconds", serialize_with = "as_seconds")]
    pub elapsed: Duration,
}

fn as_summary<S: Serializer>(r: &MatchReport, s: S) -> std::result::Result<S::Ok, S::Error> {
    MatchSummary::from(r).serialize(s)
}

fn as_seconds<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

pub fn build_topology(topology: &Topology) -> Result<Graph> {
    match topology {
        Topology::Ring { n } => generate_ring(*n).map_err(CliError::stage(Stage::Topology)),
        Topology::PreferentialAttachment { n, m, seed } => {
            generate_preferential_attachment(*n, *m, *seed)
                .map_err(CliError::stage(Stage::Topology))
        }
        Topology::File { path } => read_graph(path),
    }
}

/// Fills in `samples` (default `2n`) so the snapshot is self-contained.
pub fn resolve(cfg: &ExperimentConfig) -> Result<ExperimentConfig> {
    let mut out = cfg.clone();
    if out.samples.is_none() {
        let n = match cfg.declared_node_count() {
            Some(n) => n,
            None => build_topology(&cfg.topology)?.node_count(),
        };
        out.samples = Some(2 * n);
    }
    Ok(out)
}

/// Runs one experiment and, when the config names an output directory,
/// writes every artifact there.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunRecord> {
    let start = Instant::now();
    cfg.validate()?;
    let graph = build_topology(&cfg.topology)?;
    let n = graph.node_count();
    let mut config = cfg.clone();
    let samples = *config.samples.get_or_insert(2 * n);

    let m = laplacian(&graph, cfg.laplacian).map_err(CliError::stage(Stage::Laplacian))?;
    let obs = random_observation(n, cfg.observation.seed, &cfg.observation.mode)
        .map_err(CliError::stage(Stage::Observation))?;
    let agent = cfg.agent.as_ref().map(|a| a.model()).transpose()?;
    let opts = cfg.tolerances.recovery_options(cfg.force_full);
    let tau = cfg.tau.unwrap_or(0.0);

    let simulated = match cfg.dynamics {
        Dynamics::DtIntegrator => simulate_dt_integrator(&m, &obs, samples),
        Dynamics::CtIntegrator => simulate_ct_integrator(&m, &obs, tau, samples),
        Dynamics::DtNetwork => simulate_dt_network(&m, agent_of(&agent), &obs.c, &obs.x0, samples),
        Dynamics::CtNetwork => {
            simulate_ct_network(&m, agent_of(&agent), &obs.c, &obs.x0, tau, samples)
        }
    };
    let mut series = simulated.map_err(CliError::stage(Stage::Simulate))?;
    let mut meta = series.meta().clone();
    meta.seed = Some(cfg.observation.seed);
    series = series.with_meta(meta);

    let recovered = match cfg.dynamics {
        Dynamics::DtIntegrator => recover_dt_spectrum(&series, &opts),
        Dynamics::CtIntegrator => recover_ct_spectrum(&series, &opts),
        Dynamics::DtNetwork | Dynamics::CtNetwork => {
            recover_network_spectrum(&series, agent_of(&agent), &opts)
        }
    };
    let (estimate, empty_support) = match recovered {
        Ok(e) => (e, false),
        Err(Error::EmptySupport) => (SpectralEstimate::empty(), true),
        Err(e) => {
            return Err(CliError::Stage {
                stage: Stage::Recover,
                source: e,
            })
        }
    };

    let dec = eig_reference(&m).map_err(CliError::stage(Stage::Truth))?;
    let measure = spectral_weights_grouped(&dec, &obs, cfg.tolerances.eigen_cluster_tol)
        .map_err(CliError::stage(Stage::Truth))?;
    let support = support_set(&measure, cfg.tolerances.weight_tol);
    let report = match_spectra(&support, &estimate, cfg.tolerances.match_tol);

    let record = RunRecord {
        config,
        graph,
        series,
        estimate,
        empty_support,
        truth: Truth {
            eigenvalues: dec.eigenvalues,
            support: support.values,
        },
        report,
        elapsed: start.elapsed(),
    };
    if let Some(dir) = &cfg.output {
        write_artifacts(&record, dir)?;
    }
    Ok(record)
}

fn agent_of(agent: &Option<lapspec::AgentModel>) -> &lapspec::AgentModel {
    agent
        .as_ref()
        .expect("validated: network dynamics carry an agent")
}

/// Everything a run produced, one file per artifact.
pub fn write_artifacts(record: &RunRecord, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    write_json(&dir.join("config.json"), &record.config)?;
    write_graph(&dir.join("graph.txt"), &record.graph)?;
    write_series(&dir.join("measurements.csv"), &record.series)?;
    write_json(&dir.join("estimate.json"), &record.estimate)?;
    write_json(&dir.join("truth.json"), &record.truth)?;
    write_json(&dir.join("match.json"), &MatchSummary::from(&record.report))?;
    write_match_csv(&dir.join("match.csv"), &record.report)?;
    write_json(&dir.join("record.json"), record)?;
    emit_plot_data(record, dir)
}

/// `output_trace.csv` (`k,y`) and `eigencompare.csv` (`index,true,estimated`).
pub fn emit_plot_data(record: &RunRecord, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    write_trace_csv(&dir.join("output_trace.csv"), record.series.values())?;
    write_eigencompare_csv(
        &dir.join("eigencompare.csv"),
        &record.truth.support,
        &record.report,
    )
}

/// One line of a batch table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub seed: u64,
    /// `exact`, `mismatch` or `error`.
    pub status: &'static str,
    pub stage: Option<Stage>,
    pub rank: Option<usize>,
    pub support_size: Option<usize>,
    pub matched: Option<usize>,
    pub max_error: Option<f64>,
    pub mean_error: Option<f64>,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub trials: usize,
    pub exact: usize,
    pub mismatched: usize,
    pub errored: usize,
    /// Over trials that ran to completion.
    pub max_error: f64,
    pub mean_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchResult {
    pub rows: Vec<TrialRow>,
    pub summary: BatchSummary,
}

fn trial_row(seed: u64, outcome: Result<RunRecord>) -> TrialRow {
    match outcome {
        Ok(r) => TrialRow {
            seed,
            status: if r.report.is_exact() {
                "exact"
            } else {
                "mismatch"
            },
            stage: None,
            rank: Some(r.estimate.rank),
            support_size: Some(r.truth.support.len()),
            matched: Some(r.report.pairs.len()),
            max_error: Some(r.report.max_error),
            mean_error: Some(r.report.mean_error()),
            message: None,
        },
        Err(e) => TrialRow {
            seed,
            status: "error",
            stage: e.failed_stage(),
            rank: None,
            support_size: None,
            matched: None,
            max_error: None,
            mean_error: None,
            message: Some(e.to_string()),
        },
    }
}

/// Runs `template` once per seed in parallel. Per-trial failures are
/// recorded in the table; writes `trials.csv` and `summary.csv` when the
/// template names an output directory.
pub fn run_batch(template: &ExperimentConfig, seeds: &[u64]) -> Result<BatchResult> {
    if seeds.is_empty() {
        return Err(CliError::Config("batch needs at least one seed".into()));
    }
    template.validate()?;
    let rows: Vec<TrialRow> = seeds
        .par_iter()
        .map(|&seed| {
            let mut cfg = template.with_seed(seed);
            cfg.output = None;
            trial_row(seed, run_experiment(&cfg))
        })
        .collect();
    let completed: Vec<&TrialRow> = rows.iter().filter(|r| r.status != "error").collect();
    let summary = BatchSummary {
        trials: rows.len(),
        exact: rows.iter().filter(|r| r.status == "exact").count(),
        mismatched: rows.iter().filter(|r| r.status == "mismatch").count(),
        errored: rows.len() - completed.len(),
        max_error: completed
            .iter()
            .filter_map(|r| r.max_error)
            .fold(0.0, f64::max),
        mean_error: if completed.is_empty() {
            0.0
        } else {
            completed.iter().filter_map(|r| r.mean_error).sum::<f64>() / completed.len() as f64
        },
    };
    if let Some(dir) = &template.output {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        write_csv(&dir.join("trials.csv"), &rows)?;
        write_csv(&dir.join("summary.csv"), std::slice::from_ref(&summary))?;
    }
    Ok(BatchResult { rows, summary })
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(CliError::csv(path))?;
    for row in rows {
        w.serialize(row).map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}
