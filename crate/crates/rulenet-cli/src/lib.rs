//! Command-line driver. Every output is a deterministic function of the
//! resolved configuration.

pub mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rulenet_core::{HashOracle, Kind, ModelParams};
use rulenet_gw::{extinction_bounds, GwSchedule, Regime};
use rulenet_network::{
    build_anabolic_network, isolated_catabolic_counts, isolated_catabolic_slope,
    level_shift_analysis, predicted_slopes, CataPhase, NetworkError, DEFAULT_TAIL_LEN,
};
use rulenet_stats::output::{self, Cell};
use rulenet_stats::{
    compare_means, gw_extinction_mc, level_predictions, model2_transition_scan, run_ensemble,
    EnsembleConfig, ScanConfig, StatsError,
};
use rulenet_theory::{
    characteristic_levels, classify_phase, empty_network_prob, phase_roots, PhaseFunctions,
    TheoryError,
};
use rulenet_tree::{TreeError, DEFAULT_BUDGET};
use serde::Serialize;

use config::{ensure_dir, Defaults, RunConfig, RunOpts};

/// Default per-run vertex budget of the transition scan.
pub const SCAN_BUDGET: usize = 2_000_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("memory budget exceeded: {0}")]
    Budget(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Capacity(_) => 4,
            CliError::Schema(_) => 5,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        let msg = e.to_string();
        match e {
            _ if e.is_budget() => CliError::Budget(msg),
            _ if e.is_capacity() => CliError::Capacity(msg),
            StatsError::Schema(_) | StatsError::Shape(_) | StatsError::Csv(_) => {
                CliError::Schema(msg)
            }
            StatsError::Grid(_) | StatsError::EmptySample => CliError::Config(msg),
            StatsError::Io(io) => CliError::Io(io),
            _ => CliError::Other(msg),
        }
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::Capacity { .. } => CliError::Capacity(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<TheoryError> for CliError {
    fn from(e: TheoryError) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::Budget { .. } => CliError::Budget(e.to_string()),
            TreeError::Capacity { .. } => CliError::Capacity(e.to_string()),
            TreeError::Core(_) => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "rulenet",
    version,
    about = "Random rule-based reaction networks: trees, theory, networks"
)]
pub struct Cli {
    /// Worker threads; falls back to RULENET_THREADS, then the config file.
    #[arg(long, env = "RULENET_THREADS", global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ana,
    Cata,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Ana => Kind::Anabolic,
            KindArg::Cata => Kind::Catabolic,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ensemble of composition or fragmentation trees: levels.csv, heights.csv, summary.json.
    Tree {
        kind: KindArg,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Phase functions over a z grid and level predictions: phases.csv, roots.json, predictions.csv.
    Theory {
        #[arg(long, value_enum, default_value = "ana")]
        kind: KindArg,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Galton-Watson extinction and log sizes: extinction.csv, logsize.csv.
    Gw {
        kind: KindArg,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Network component counts: components.csv plus network_summary.json or catabolic_report.json.
    Network {
        kind: KindArg,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Joins a levels.csv with a predictions.csv: ratios.csv, comparison.json.
    Compare {
        #[arg(long)]
        stats: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Model II transition scan over a z grid: scan.csv, scan.json.
    Scan {
        /// Stop a grid point after its first budget overflow.
        #[arg(long)]
        stop_early: bool,
        #[command(flatten)]
        opts: RunOpts,
    },
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let threads = cli.threads;
    match cli.command {
        Command::Tree { kind, opts } => {
            let n_max = if kind == KindArg::Ana { 54 } else { 34 };
            let cfg = opts.resolve(Defaults {
                n_max,
                samples: 100,
                default_z: None,
                budget: DEFAULT_BUDGET,
            })?;
            with_threads(threads.or(cfg.threads), || tree(kind.into(), &cfg))
        }
        Command::Theory { kind, opts } => {
            let cfg = opts.resolve(Defaults {
                n_max: 54,
                samples: 1,
                default_z: None,
                budget: DEFAULT_BUDGET,
            })?;
            with_threads(threads.or(cfg.threads), || theory(kind.into(), &cfg))
        }
        Command::Gw { kind, opts } => {
            let cfg = opts.resolve(Defaults {
                n_max: 40,
                samples: 10_000,
                default_z: None,
                budget: DEFAULT_BUDGET,
            })?;
            with_threads(threads.or(cfg.threads), || gw(kind.into(), &cfg))
        }
        Command::Network { kind, opts } => {
            let cfg = opts.resolve(Defaults {
                n_max: 8,
                samples: 1,
                default_z: None,
                budget: DEFAULT_BUDGET,
            })?;
            with_threads(threads.or(cfg.threads), || network(kind.into(), &cfg))
        }
        Command::Compare {
            stats,
            predictions,
            out,
        } => compare(&stats, &predictions, &out),
        Command::Scan { stop_early, opts } => {
            let cfg = opts.resolve(Defaults {
                n_max: 18,
                samples: 100,
                default_z: Some(0.5),
                budget: SCAN_BUDGET,
            })?;
            with_threads(threads.or(cfg.threads), || scan(&cfg, stop_early))
        }
    }
}

fn with_threads<T>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError>
where
    T: Send,
{
    match threads {
        Some(0) => Err(CliError::Config("threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Other(e.to_string()))?
            .install(f),
        None => f(),
    }
}

fn tree(kind: Kind, cfg: &RunConfig) -> Result<(), CliError> {
    let ens = EnsembleConfig::new(cfg.params.clone(), kind, cfg.samples, cfg.n_max, cfg.seed)
        .with_budget(cfg.budget);
    let report = run_ensemble(&ens)?;
    ensure_dir(&cfg.out)?;
    output::write_stats_report(&cfg.out, &report)?;
    Ok(())
}

fn params_at(base: &ModelParams, z: f64) -> Result<ModelParams, CliError> {
    ModelParams::model_ii(base.alphabet, base.foodset.clone(), base.p, base.q, z)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn opt_u32(v: Option<u32>) -> Cell {
    v.into()
}

#[derive(Serialize)]
struct RootsFile {
    kind: Kind,
    alphabet_size: u32,
    food_count: usize,
    strength: f64,
    y_phi: Option<f64>,
    z_prime_phi: f64,
    z_phi: Option<f64>,
    z_star: f64,
    phi_max: f64,
}

fn theory(kind: Kind, cfg: &RunConfig) -> Result<(), CliError> {
    let pf = PhaseFunctions::from_params(kind, &cfg.params);
    let grid = cfg
        .z_grid
        .clone()
        .unwrap_or_else(|| (1..=99).map(|i| i as f64 / 100.0).collect());
    let mut rows = Vec::with_capacity(grid.len());
    for &z in &grid {
        let (psi, phi) = (pf.psi(z)?, pf.phi(z)?);
        let phase = classify_phase(&pf, z)?.phase;
        let levels = characteristic_levels(&pf, z)?;
        let empty = empty_network_prob(kind, &params_at(&cfg.params, z)?);
        rows.push(vec![
            z.into(),
            psi.into(),
            phi.into(),
            phase.label().into(),
            opt_u32(levels.n0),
            opt_u32(levels.n0_prime),
            opt_u32(levels.m0),
            opt_u32(levels.m0_prime),
            empty.probability.into(),
        ]);
    }
    let roots = phase_roots(&pf);
    let roots_file = RootsFile {
        kind,
        alphabet_size: pf.alphabet_size(),
        food_count: pf.food_count(),
        strength: pf.strength(),
        y_phi: roots.y_phi,
        z_prime_phi: roots.z_prime_phi,
        z_phi: roots.z_phi,
        z_star: roots.z_star,
        phi_max: roots.phi_max,
    };
    let preds = level_predictions(kind, &cfg.params, cfg.n_max);
    ensure_dir(&cfg.out)?;
    output::write_csv(&cfg.out.join("phases.csv"), &output::PHASES, rows)?;
    output::write_json(&cfg.out.join("roots.json"), &roots_file)?;
    output::write_csv(
        &cfg.out.join("predictions.csv"),
        &output::PREDICTIONS,
        output::predictions_rows(&preds),
    )?;
    Ok(())
}

fn regime_label(r: Regime) -> &'static str {
    match r {
        Regime::A1 => "A1",
        Regime::A2 => "A2",
        Regime::B1 => "B1",
        Regime::B2 => "B2",
    }
}

fn gw(kind: Kind, cfg: &RunConfig) -> Result<(), CliError> {
    let s = GwSchedule::for_params(kind, &cfg.params);
    let mc = gw_extinction_mc(&s, cfg.samples, cfg.n_max, cfg.seed);
    let mut ext = Vec::new();
    let mut logs = Vec::new();
    for n in 1..=cfg.n_max {
        let e = extinction_bounds(&s, n).map_err(|e| CliError::Other(e.to_string()))?;
        let m = &mc[n as usize];
        ext.push(vec![
            n.into(),
            e.u_exact.into(),
            e.lower.into(),
            e.upper.into(),
            regime_label(e.regime).into(),
            m.mean.into(),
            m.stderr.into(),
        ]);
        let mean_log = s
            .expected_log_size(n)
            .map_err(|e| CliError::Other(e.to_string()))?;
        let log_mean = s.ln_mean_level_size(n);
        let gap = if log_mean != 0.0 {
            Some((mean_log.value - log_mean).abs() / log_mean.abs())
        } else {
            None
        };
        logs.push(vec![
            n.into(),
            mean_log.value.into(),
            log_mean.into(),
            s.harmonic_log_size(n).value.into(),
            gap.into(),
            e.survival.into(),
        ]);
    }
    ensure_dir(&cfg.out)?;
    output::write_csv(&cfg.out.join("extinction.csv"), &output::EXTINCTION, ext)?;
    output::write_csv(&cfg.out.join("logsize.csv"), &output::LOGSIZE, logs)?;
    Ok(())
}

#[derive(Serialize)]
struct NetworkSummary {
    n_max: u32,
    seed: u64,
    vertices: usize,
    components: usize,
    no_two_paths: bool,
    no_two_embedded_paths: bool,
    predicted_isolated_slope: f64,
    predicted_two_molecule_slope: f64,
}

#[derive(Serialize)]
struct CatabolicFile {
    phase: CataPhase,
    n_max: u32,
    seed: u64,
    isolated_slope: Option<f64>,
    level_shift: Option<rulenet_network::CatabolicNetworkReport>,
}

fn network(kind: Kind, cfg: &RunConfig) -> Result<(), CliError> {
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join("components.csv");
    match kind {
        Kind::Anabolic => {
            let net = build_anabolic_network(&cfg.params, cfg.seed, cfg.n_max)?;
            let open = net.open_vertex_counts();
            let rows = (0..=cfg.n_max as usize).map(|n| {
                vec![
                    Cell::from(n as u64),
                    net.isolated_counts()[n].into(),
                    net.two_molecule_counts()[n].into(),
                    open[n].into(),
                ]
            });
            output::write_csv(&path, &output::COMPONENTS, rows)?;
            let slopes = predicted_slopes(&cfg.params);
            let summary = NetworkSummary {
                n_max: cfg.n_max,
                seed: cfg.seed,
                vertices: net.vertex_count(),
                components: net.component_count(),
                no_two_paths: net.check_no_two_paths().is_ok(),
                no_two_embedded_paths: net.check_no_two_embedded_paths().is_ok(),
                predicted_isolated_slope: slopes.isolated,
                predicted_two_molecule_slope: slopes.two_molecule,
            };
            output::write_json(&cfg.out.join("network_summary.json"), &summary)?;
        }
        Kind::Catabolic => {
            let oracle = HashOracle::new(&cfg.params, cfg.seed);
            let counts =
                isolated_catabolic_counts(&cfg.params, &oracle, cfg.n_max, DEFAULT_TAIL_LEN)?;
            let rows = counts.iter().enumerate().map(|(n, &c)| {
                vec![
                    Cell::from(n as u64),
                    c.into(),
                    Cell::OptInt(None),
                    Cell::OptInt(None),
                ]
            });
            output::write_csv(&path, &output::COMPONENTS, rows)?;
            let phase = CataPhase::of(&cfg.params);
            let report = CatabolicFile {
                phase,
                n_max: cfg.n_max,
                seed: cfg.seed,
                isolated_slope: isolated_catabolic_slope(&cfg.params).ok(),
                level_shift: match phase {
                    CataPhase::Fragmentation => Some(level_shift_analysis(&cfg.params, cfg.n_max)?),
                    CataPhase::Finite => None,
                },
            };
            output::write_json(&cfg.out.join("catabolic_report.json"), &report)?;
        }
    }
    Ok(())
}

fn compare(
    stats: &std::path::Path,
    predictions: &std::path::Path,
    out: &std::path::Path,
) -> Result<(), CliError> {
    let levels = output::read_csv(stats, &output::LEVELS)?;
    let preds = output::read_predictions(&output::read_csv(predictions, &output::PREDICTIONS)?)?;
    let empirical = levels.f64s("mean_V")?;
    let c = compare_means(&empirical, &preds)?;
    ensure_dir(out)?;
    output::write_csv(
        &out.join("ratios.csv"),
        &output::RATIOS,
        output::ratios_rows(&c),
    )?;
    #[derive(Serialize)]
    struct Summaries<'a> {
        plain: &'a rulenet_stats::PredictionSummary,
        k0: &'a rulenet_stats::PredictionSummary,
        k1: Option<&'a rulenet_stats::PredictionSummary>,
    }
    output::write_json(
        &out.join("comparison.json"),
        &Summaries {
            plain: &c.plain,
            k0: &c.k0,
            k1: c.k1.as_ref(),
        },
    )?;
    Ok(())
}

fn scan(cfg: &RunConfig, stop_early: bool) -> Result<(), CliError> {
    let grid = cfg
        .z_grid
        .clone()
        .ok_or_else(|| CliError::Config("scan needs z_grid".into()))?;
    let budget = cfg.budget;
    let sc = ScanConfig {
        base: cfg.params.clone(),
        sample_size: cfg.samples,
        n_max: cfg.n_max,
        master_seed: cfg.seed,
        budget,
        stop_early,
    };
    let result = model2_transition_scan(&sc, &grid)?;
    ensure_dir(&cfg.out)?;
    output::write_csv(
        &cfg.out.join("scan.csv"),
        &output::SCAN,
        output::scan_rows(&result),
    )?;
    #[derive(Serialize)]
    struct ScanFile {
        bracket: Option<(f64, f64)>,
        monotone: bool,
        theory_z_star: Option<f64>,
        budget: usize,
        sample_size: u64,
        n_max: u32,
    }
    let file = ScanFile {
        bracket: result.bracket,
        monotone: result.monotone,
        theory_z_star: result.theory_z_star,
        budget,
        sample_size: cfg.samples,
        n_max: cfg.n_max,
    };
    output::write_json(&cfg.out.join("scan.json"), &file)?;
    Ok(())
}
