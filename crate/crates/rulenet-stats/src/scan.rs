use rayon::prelude::*;
use rulenet_core::{Kind, ModelParams};
use rulenet_theory::{phase_roots, PhaseFunctions};
use rulenet_tree::{Height, TreeError};
use serde::{Deserialize, Serialize};

use crate::{run_one, EnsembleConfig, StatsError};

/// Runs per scheduling round of the scan.
const ROUND: u64 = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Alphabet, foods, `p` and `q`; `z` is replaced by each grid value.
    pub base: ModelParams,
    pub sample_size: u64,
    pub n_max: u32,
    pub master_seed: u64,
    /// Per-run vertex budget; exceeding it classifies the run as exploding.
    pub budget: usize,
    /// Stop a grid point after the first round containing an exploding run.
    pub stop_early: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunOutcome {
    /// Red vertices died out before `n_max`.
    Extinct,
    /// Red vertices remain at `n_max`.
    Censored,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanClass {
    /// Every run stayed within the budget.
    Finite,
    /// Some run exceeded the budget.
    Exploding,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub z: f64,
    pub runs: u64,
    pub extinct: u64,
    pub censored: u64,
    pub budget_exceeded: u64,
    pub class: ScanClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionScan {
    /// Sorted by `z`.
    pub points: Vec<ScanPoint>,
    /// Largest exploding `z` and the next finite `z` above it.
    pub bracket: Option<(f64, f64)>,
    /// Exploding points all lie below finite ones.
    pub monotone: bool,
    /// Root of `ψ` for the same parameters, when defined.
    pub theory_z_star: Option<f64>,
}

impl TransitionScan {
    pub fn bracket_midpoint(&self) -> Option<f64> {
        self.bracket.map(|(a, b)| 0.5 * (a + b))
    }
}

fn outcome(cfg: &EnsembleConfig, index: u64) -> Result<RunOutcome, StatsError> {
    match run_one(cfg, index) {
        Ok(r) => Ok(match r.height {
            Height::Censored(_) => RunOutcome::Censored,
            Height::Empty | Height::Finite(_) => RunOutcome::Extinct,
        }),
        Err(StatsError::Run {
            source: TreeError::Budget { .. },
            ..
        }) => Ok(RunOutcome::BudgetExceeded),
        Err(e) => Err(e),
    }
}

fn scan_point(cfg: &ScanConfig, z: f64) -> Result<ScanPoint, StatsError> {
    let params = ModelParams::model_ii(
        cfg.base.alphabet,
        cfg.base.foodset.clone(),
        cfg.base.p,
        cfg.base.q,
        z,
    )
    .map_err(|_| StatsError::Grid(z))?;
    let ens = EnsembleConfig::new(
        params,
        Kind::Anabolic,
        cfg.sample_size,
        cfg.n_max,
        cfg.master_seed,
    )
    .with_budget(cfg.budget);
    let mut point = ScanPoint {
        z,
        runs: 0,
        extinct: 0,
        censored: 0,
        budget_exceeded: 0,
        class: ScanClass::Finite,
    };
    let mut start = 0;
    while start < cfg.sample_size {
        let end = (start + ROUND).min(cfg.sample_size);
        let outcomes: Vec<RunOutcome> = (start..end)
            .into_par_iter()
            .map(|i| outcome(&ens, i))
            .collect::<Result<_, _>>()?;
        for o in outcomes {
            point.runs += 1;
            match o {
                RunOutcome::Extinct => point.extinct += 1,
                RunOutcome::Censored => point.censored += 1,
                RunOutcome::BudgetExceeded => point.budget_exceeded += 1,
            }
        }
        if point.budget_exceeded > 0 {
            point.class = ScanClass::Exploding;
            if cfg.stop_early {
                break;
            }
        }
        start = end;
    }
    Ok(point)
}

/// Classifies each grid value of `z` as finite or exploding, the latter when
/// some run overflows the vertex budget. Runs still alive at `n_max` do not
/// count as exploding: periodic lineages such as `bⁿ` only add one new suffix
/// per level and survive with positive probability at every `z`.
///
/// Every grid point reuses the same seeds, so a run's field only gains
/// reactions as `z` grows.
pub fn model2_transition_scan(
    cfg: &ScanConfig,
    z_grid: &[f64],
) -> Result<TransitionScan, StatsError> {
    if cfg.sample_size == 0 {
        return Err(StatsError::EmptySample);
    }
    if let Some(&z) = z_grid.iter().find(|&&z| !(z > 0.0 && z < 1.0)) {
        return Err(StatsError::Grid(z));
    }
    let mut grid = z_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let points = grid
        .iter()
        .map(|&z| scan_point(cfg, z))
        .collect::<Result<Vec<_>, _>>()?;

    let last_exploding = points.iter().rposition(|p| p.class == ScanClass::Exploding);
    let first_finite = points.iter().position(|p| p.class == ScanClass::Finite);
    let monotone = match (last_exploding, first_finite) {
        (Some(e), Some(f)) => e < f,
        _ => true,
    };
    let bracket = last_exploding.and_then(|e| points.get(e + 1).map(|next| (points[e].z, next.z)));
    let theory_z_star =
        Some(phase_roots(&PhaseFunctions::from_params(Kind::Anabolic, &cfg.base)).z_star);
    Ok(TransitionScan {
        points,
        bracket,
        monotone,
        theory_z_star,
    })
}
