//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lapspec::{
    eig_reference, generate_preferential_attachment, generate_ring, laplacian, match_spectra,
    random_observation, recover_ct_spectrum, recover_dt_spectrum, recover_network_spectrum,
    simulate_ct_integrator, simulate_ct_network, simulate_dt_integrator, simulate_dt_network,
    spectral_weights_grouped, support_set, Error, LaplacianKind, ObservationMode, SpectralEstimate,
    SupportSet, TimeDomain,
};

use crate::config::{AgentSpec, Dynamics, ExperimentConfig, Tolerances};
use crate::error::{CliError, Result, Stage};
use crate::graph_file::{format_graph, read_graph, write_graph};
use crate::measurements::{read_series, write_series};
use crate::reports::{read_estimate, read_json, write_json, write_match_csv, MatchSummary};
use crate::runner::{resolve, run_batch, run_experiment};

#[derive(Debug, Parser)]
#[command(
    name = "lapspec",
    version,
    about = "Recover observable Laplacian eigenvalues of a network from one output sequence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Generate(GenerateArgs),
    /// Simulate a measurement series on a graph file.
    Simulate(SimulateArgs),
    /// Recover eigenvalues from a measurement series.
    Estimate(EstimateArgs),
    /// Match an estimate against the reference spectrum of a graph.
    Compare(CompareArgs),
    /// Run one full experiment from a config or preset.
    Run(RunArgs),
    /// Run one experiment per seed in parallel and summarize.
    Batch(BatchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GeneratorKind {
    Ring,
    PreferentialAttachment,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Combinatorial,
    #[value(alias = "normalized")]
    NormalizedRandomWalk,
}

impl From<KindArg> for LaplacianKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Combinatorial => LaplacianKind::Combinatorial,
            KindArg::NormalizedRandomWalk => LaplacianKind::NormalizedRandomWalk,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GeneratorKind,
    /// Node count.
    #[arg(long)]
    n: usize,
    /// Edges added per new node (preferential attachment).
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Which agents the output reads, numbered from 0.
#[derive(Debug, Args)]
struct ObservationArgs {
    /// Observe a single agent.
    #[arg(long, conflicts_with = "subset")]
    observe: Option<usize>,
    /// Weighted agents, `agent:weight,...`.
    #[arg(long, value_parser = parse_subset)]
    subset: Option<Subset>,
    /// Seed of the random initial state.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone)]
struct Subset(Vec<(usize, f64)>);

impl ObservationArgs {
    fn mode(&self) -> Option<ObservationMode> {
        match (&self.observe, &self.subset) {
            (Some(i), _) => Some(ObservationMode::SingleAgent(*i)),
            (None, Some(s)) => Some(ObservationMode::Subset(s.0.clone())),
            (None, None) => None,
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    dynamics: Dynamics,
    #[arg(long, value_enum)]
    laplacian: KindArg,
    #[command(flatten)]
    observation: ObservationArgs,
    /// Agent model JSON (`a`, `beta`, `gamma`) for network dynamics.
    #[arg(long)]
    agent: Option<PathBuf>,
    /// Sampling period for continuous-time dynamics.
    #[arg(long)]
    tau: Option<f64>,
    /// Defaults to twice the node count.
    #[arg(long)]
    samples: Option<usize>,
    /// CSV path; the sidecar goes next to it.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Default, Args)]
struct RecoveryArgs {
    #[arg(long)]
    rank_rel_tol: Option<f64>,
    #[arg(long)]
    imag_tol: Option<f64>,
    #[arg(long)]
    root_cluster_tol: Option<f64>,
    #[arg(long)]
    pos_tol: Option<f64>,
    #[arg(long)]
    unmix_tol: Option<f64>,
    /// Read the rank from the largest Hankel matrix instead of stopping early.
    #[arg(long)]
    force_full: bool,
}

impl RecoveryArgs {
    fn apply(&self, t: &mut Tolerances) {
        set(&mut t.rank_rel_tol, self.rank_rel_tol);
        set(&mut t.imag_tol, self.imag_tol);
        set(&mut t.root_cluster_tol, self.root_cluster_tol);
        set(&mut t.pos_tol, self.pos_tol);
        set(&mut t.unmix_tol, self.unmix_tol);
    }
}

#[derive(Debug, Default, Args)]
struct TruthArgs {
    #[arg(long)]
    match_tol: Option<f64>,
    #[arg(long)]
    weight_tol: Option<f64>,
    #[arg(long)]
    eigen_cluster_tol: Option<f64>,
}

impl TruthArgs {
    fn apply(&self, t: &mut Tolerances) {
        set(&mut t.match_tol, self.match_tol);
        set(&mut t.weight_tol, self.weight_tol);
        set(&mut t.eigen_cluster_tol, self.eigen_cluster_tol);
    }
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long)]
    measurements: PathBuf,
    /// Agent model JSON; unmixes identical-agent network outputs.
    #[arg(long)]
    agent: Option<PathBuf>,
    /// Sampling period, when the series has no sidecar.
    #[arg(long)]
    tau: Option<f64>,
    #[command(flatten)]
    recovery: RecoveryArgs,
    /// Defaults to stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    estimate: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    laplacian: KindArg,
    /// Without an observation the truth is every distinct eigenvalue.
    #[command(flatten)]
    observation: ObservationArgs,
    #[command(flatten)]
    truth: TruthArgs,
    /// Match report JSON; printed to stdout when neither output is given.
    #[arg(long)]
    json: Option<PathBuf>,
    /// `true,estimated,error` table.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ConfigSource {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = ["pa10", "ring12"])]
    preset: Option<String>,
}

impl ConfigSource {
    fn load(&self) -> Result<ExperimentConfig> {
        match (&self.config, &self.preset) {
            (Some(path), _) => read_json(path),
            (None, Some(name)) => {
                Ok(ExperimentConfig::preset(name).expect("clap checked the name"))
            }
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

/// Flags that override config fields.
#[derive(Debug, Args)]
struct Overrides {
    #[arg(long, value_enum)]
    laplacian: Option<KindArg>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    /// Observation seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    recovery: RecoveryArgs,
    #[command(flatten)]
    truth: TruthArgs,
    /// Dump the resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
}

impl Overrides {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(k) = self.laplacian {
            cfg.laplacian = k.into();
        }
        if self.samples.is_some() {
            cfg.samples = self.samples;
        }
        if self.tau.is_some() {
            cfg.tau = self.tau;
        }
        set(&mut cfg.observation.seed, self.seed);
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        self.recovery.apply(&mut cfg.tolerances);
        self.truth.apply(&mut cfg.tolerances);
        cfg.force_full |= self.recovery.force_full;
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    source: ConfigSource,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Args)]
struct BatchArgs {
    #[command(flatten)]
    source: ConfigSource,
    /// Comma-separated seeds and ranges, e.g. `1..=100` or `3,5,10..20`.
    #[arg(long, value_parser = parse_seeds)]
    seeds: Seeds,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Clone)]
struct Seeds(Vec<u64>);

fn parse_subset(s: &str) -> std::result::Result<Subset, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (i, w) = p.split_once(':').unwrap_or((p, "1"));
            let i = i.trim().parse().map_err(|_| format!("bad agent {i:?}"))?;
            let w = w.trim().parse().map_err(|_| format!("bad weight {w:?}"))?;
            Ok((i, w))
        })
        .collect::<std::result::Result<_, _>>()
        .map(Subset)
}

fn parse_seeds(s: &str) -> std::result::Result<Seeds, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("bad seed {t:?}"))
    };
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        if let Some((a, b)) = part.split_once("..=") {
            out.extend(num(a)?..=num(b)?);
        } else if let Some((a, b)) = part.split_once("..") {
            out.extend(num(a)?..num(b)?);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(Seeds(out))
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(CliError::io("<stdout>"))
}

fn json_out<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::json("<stdout>"))?;
    text.push('\n');
    write_out(out, &text)
}

fn generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let g = match args.kind {
        GeneratorKind::Ring => generate_ring(args.n),
        GeneratorKind::PreferentialAttachment => {
            generate_preferential_attachment(args.n, args.m, args.seed)
        }
    }
    .map_err(CliError::stage(Stage::Topology))?;
    match &args.output {
        Some(path) => write_graph(path, &g),
        None => write_out(out, &format_graph(&g)),
    }
}

fn load_agent(path: &Path) -> Result<lapspec::AgentModel> {
    read_json::<AgentSpec>(path)?.model()
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let n = g.node_count();
    let kind = args.laplacian.into();
    let m = laplacian(&g, kind).map_err(CliError::stage(Stage::Laplacian))?;
    let mode = args
        .observation
        .mode()
        .ok_or_else(|| CliError::Config("give --observe or --subset".into()))?;
    let obs = random_observation(n, args.observation.seed, &mode)
        .map_err(CliError::stage(Stage::Observation))?;
    let samples = args.samples.unwrap_or(2 * n);
    let tau = || {
        args.tau
            .ok_or_else(|| CliError::Config(format!("{} needs --tau", args.dynamics.name())))
    };
    let agent = || match &args.agent {
        Some(p) => load_agent(p),
        None => Err(CliError::Config(format!(
            "{} needs --agent",
            args.dynamics.name()
        ))),
    };
    let series = match args.dynamics {
        Dynamics::DtIntegrator => simulate_dt_integrator(&m, &obs, samples),
        Dynamics::CtIntegrator => simulate_ct_integrator(&m, &obs, tau()?, samples),
        Dynamics::DtNetwork => simulate_dt_network(&m, &agent()?, &obs.c, &obs.x0, samples),
        Dynamics::CtNetwork => simulate_ct_network(&m, &agent()?, &obs.c, &obs.x0, tau()?, samples),
    }
    .map_err(CliError::stage(Stage::Simulate))?;
    let mut meta = series.meta().clone();
    meta.seed = Some(args.observation.seed);
    write_series(&args.output, &series.with_meta(meta))
}

fn estimate(args: &EstimateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let fallback = Some(match args.tau {
        Some(tau) => TimeDomain::Ct { tau },
        None => TimeDomain::Dt,
    });
    let series = read_series(&args.measurements, fallback)?;
    let mut tol = Tolerances::default();
    args.recovery.apply(&mut tol);
    let opts = tol.recovery_options(args.recovery.force_full);
    let result = match (&args.agent, series.domain()) {
        (Some(p), _) => recover_network_spectrum(&series, &load_agent(p)?, &opts),
        (None, TimeDomain::Dt) => recover_dt_spectrum(&series, &opts),
        (None, TimeDomain::Ct { .. }) => recover_ct_spectrum(&series, &opts),
    };
    let est = match result {
        Ok(e) => e,
        Err(Error::EmptySupport) => {
            let _ = writeln!(err, "note: nothing observable in the series");
            SpectralEstimate::empty()
        }
        Err(e) => {
            return Err(CliError::Stage {
                stage: Stage::Recover,
                source: e,
            })
        }
    };
    match &args.output {
        Some(path) => write_json(path, &est),
        None => json_out(out, &est),
    }
}

/// Ascending eigenvalues merged within `tol`.
fn distinct(values: &[f64], tol: f64) -> Vec<f64> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some(run) if v - run[run.len() - 1] <= tol => run.push(v),
            _ => out.push(vec![v]),
        }
    }
    out.iter()
        .map(|r| r.iter().sum::<f64>() / r.len() as f64)
        .collect()
}

fn compare(args: &CompareArgs, out: &mut dyn Write) -> Result<()> {
    let est = read_estimate(&args.estimate)?;
    let g = read_graph(&args.graph)?;
    let m = laplacian(&g, args.laplacian.into()).map_err(CliError::stage(Stage::Laplacian))?;
    let dec = eig_reference(&m).map_err(CliError::stage(Stage::Truth))?;
    let mut tol = Tolerances::default();
    args.truth.apply(&mut tol);
    let truth = match args.observation.mode() {
        Some(mode) => {
            let obs = random_observation(g.node_count(), args.observation.seed, &mode)
                .map_err(CliError::stage(Stage::Observation))?;
            let measure = spectral_weights_grouped(&dec, &obs, tol.eigen_cluster_tol)
                .map_err(CliError::stage(Stage::Truth))?;
            support_set(&measure, tol.weight_tol)
        }
        None => SupportSet {
            values: distinct(&dec.eigenvalues, tol.eigen_cluster_tol),
        },
    };
    let report = match_spectra(&truth, &est, tol.match_tol);
    if let Some(p) = &args.csv {
        write_match_csv(p, &report)?;
    }
    match &args.json {
        Some(p) => write_json(p, &MatchSummary::from(&report)),
        None if args.csv.is_none() => json_out(out, &MatchSummary::from(&report)),
        None => Ok(()),
    }
}

fn configured(source: &ConfigSource, overrides: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg = source.load()?;
    overrides.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = configured(&args.source, &args.overrides)?;
    if args.overrides.print_config {
        return json_out(out, &resolve(&cfg)?);
    }
    let r = run_experiment(&cfg)?;
    let mut line = format!(
        "rank {}, support {}, matched {}/{}, max error {:.3e}",
        r.estimate.rank,
        r.truth.support.len(),
        r.report.pairs.len(),
        r.truth.support.len(),
        r.report.max_error
    );
    if r.empty_support {
        line.push_str(", nothing observable");
    }
    if !r.report.is_exact() {
        line.push_str(", inexact");
    }
    line.push('\n');
    write_out(out, &line)
}

fn batch(args: &BatchArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = configured(&args.source, &args.overrides)?;
    if args.overrides.print_config {
        return json_out(out, &resolve(&cfg)?);
    }
    let s = run_batch(&cfg, &args.seeds.0)?.summary;
    write_out(
        out,
        &format!(
            "trials {}, exact {}, mismatched {}, errors {}, max error {:.3e}, mean error {:.3e}\n",
            s.trials, s.exact, s.mismatched, s.errored, s.max_error, s.mean_error
        ),
    )
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return crate::error::EXIT_VALIDATION;
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate(a, out),
        Command::Simulate(a) => simulate(a),
        Command::Estimate(a) => estimate(a, out, err),
        Command::Compare(a) => compare(a, out),
        Command::Run(a) => run(a, out),
        Command::Batch(a) => batch(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
