use rayon::prelude::*;
use rulenet_core::{derive_seed, HashOracle, Kind, ModelParams};
use rulenet_tree::{
    build_anabolic_tree_with, build_fragmentation_tree_with, BuildOptions, Height, DEFAULT_BUDGET,
};
use serde::{Deserialize, Serialize};

use crate::StatsError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub params: ModelParams,
    pub kind: Kind,
    pub sample_size: u64,
    pub n_max: u32,
    pub master_seed: u64,
    /// Per-run cap on red plus blue vertices.
    pub budget: usize,
}

impl EnsembleConfig {
    pub fn new(
        params: ModelParams,
        kind: Kind,
        sample_size: u64,
        n_max: u32,
        master_seed: u64,
    ) -> Self {
        Self {
            params,
            kind,
            sample_size,
            n_max,
            master_seed,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// Seed of run `index`. Extending the sample keeps earlier runs unchanged.
    pub fn run_seed(&self, index: u64) -> u64 {
        derive_seed(self.master_seed, index)
    }
}

/// Per-level counts of one tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub index: u64,
    pub seed: u64,
    pub sizes: Vec<u64>,
    pub prims: Vec<u64>,
    pub height: Height,
}

/// Builds tree `index` of the ensemble.
pub fn run_one(cfg: &EnsembleConfig, index: u64) -> Result<RunSummary, StatsError> {
    let seed = cfg.run_seed(index);
    let oracle = HashOracle::new(&cfg.params, seed);
    let opts = BuildOptions::new(cfg.n_max).with_budget(cfg.budget);
    let tree = match cfg.kind {
        Kind::Anabolic => build_anabolic_tree_with(&cfg.params, &oracle, opts),
        Kind::Catabolic => build_fragmentation_tree_with(&cfg.params, &oracle, opts),
    }
    .map_err(|source| StatsError::Run {
        index,
        seed,
        source,
    })?;
    let widen = |v: Vec<usize>| v.into_iter().map(|x| x as u64).collect();
    Ok(RunSummary {
        index,
        seed,
        sizes: widen(tree.level_sizes()),
        prims: widen(tree.prim_counts()),
        height: tree.height(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: u32,
    pub mean_v: f64,
    /// Standard error of `mean_v`.
    pub se_v: f64,
    pub mean_prim: f64,
    pub se_prim: f64,
    /// Runs with `|V_n| ≥ 1`.
    pub surviving_runs: u64,
    /// `⟨log |V_n|⟩` over surviving runs.
    pub mean_log_v: Option<f64>,
    /// `log ⟨|V_n|⟩` over the same surviving runs.
    pub log_mean_v: Option<f64>,
    /// `log(⟨V_{n+1}⟩ / ⟨V_n⟩)` over all runs.
    pub log_growth: Option<f64>,
}

impl LevelStats {
    /// `⟨log V⟩ ≤ log ⟨V⟩`, vacuous without surviving runs.
    pub fn jensen_holds(&self) -> bool {
        match (self.mean_log_v, self.log_mean_v) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightBin {
    /// −1 for trees without any red vertex.
    pub height: i64,
    pub count: u64,
    /// The bin at `n_max` holds the censored trees.
    pub censored: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub kind: Kind,
    pub sample_size: u64,
    pub n_max: u32,
    pub master_seed: u64,
    pub levels: Vec<LevelStats>,
    pub heights: Vec<HeightBin>,
    pub censored: u64,
    pub mean_height: f64,
    /// Smallest argmax of `⟨V_n⟩`.
    pub n0: u32,
    /// First level with `⟨V_n⟩ < 1`.
    pub n0_prime: Option<u32>,
    /// Smallest argmax of `⟨Prim_n⟩`.
    pub m0: u32,
    /// First level above `m0` with `⟨Prim_n⟩ < 1`.
    pub m0_prime: Option<u32>,
    /// `P[ht < n]` for `n = 0..=n_max`.
    pub extinction_cdf: Vec<f64>,
}

impl StatsReport {
    pub fn mean_sizes(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.mean_v).collect()
    }

    pub fn mean_prims(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.mean_prim).collect()
    }

    /// Levels where the Jensen inequality fails (expected empty).
    pub fn jensen_violations(&self) -> Vec<u32> {
        self.levels
            .iter()
            .filter(|l| !l.jensen_holds())
            .map(|l| l.level)
            .collect()
    }

    /// Aggregates per-run summaries, in the given order.
    pub fn aggregate(cfg: &EnsembleConfig, runs: &[RunSummary]) -> Result<Self, StatsError> {
        if runs.is_empty() {
            return Err(StatsError::EmptySample);
        }
        let levels_n = cfg.n_max as usize + 1;
        if let Some(r) = runs
            .iter()
            .find(|r| r.sizes.len() != levels_n || r.prims.len() != levels_n)
        {
            return Err(StatsError::Shape(format!(
                "run {} has {} levels, expected {levels_n}",
                r.index,
                r.sizes.len()
            )));
        }
        let k = runs.len() as f64;
        let mut levels: Vec<LevelStats> = (0..levels_n)
            .map(|n| {
                let v: Vec<f64> = runs.iter().map(|r| r.sizes[n] as f64).collect();
                let b: Vec<f64> = runs.iter().map(|r| r.prims[n] as f64).collect();
                let (mean_v, se_v) = mean_se(&v);
                let (mean_prim, se_prim) = mean_se(&b);
                let alive: Vec<f64> = v.iter().copied().filter(|&x| x >= 1.0).collect();
                let (mean_log_v, log_mean_v) = log_moments(&alive).unzip();
                LevelStats {
                    level: n as u32,
                    mean_v,
                    se_v,
                    mean_prim,
                    se_prim,
                    surviving_runs: alive.len() as u64,
                    mean_log_v,
                    log_mean_v,
                    log_growth: None,
                }
            })
            .collect();
        for n in 0..levels_n.saturating_sub(1) {
            let (a, b) = (levels[n].mean_v, levels[n + 1].mean_v);
            if a > 0.0 && b > 0.0 {
                levels[n].log_growth = Some((b / a).ln());
            }
        }

        let mut counts = vec![0u64; levels_n];
        let mut empty = 0u64;
        let mut height_sum = 0.0;
        for r in runs {
            let h = r.height.reported();
            height_sum += h as f64;
            if h < 0 {
                empty += 1;
            } else {
                counts[h as usize] += 1;
            }
        }
        let censored = runs.iter().filter(|r| r.height.is_censored()).count() as u64;
        let mut heights = Vec::with_capacity(levels_n + 1);
        if empty > 0 {
            heights.push(HeightBin {
                height: -1,
                count: empty,
                censored: false,
            });
        }
        heights.extend(counts.iter().enumerate().map(|(h, &count)| HeightBin {
            height: h as i64,
            count,
            censored: h == cfg.n_max as usize,
        }));

        let mut extinction_cdf = Vec::with_capacity(levels_n);
        let mut below = empty;
        for &c in &counts {
            extinction_cdf.push(below as f64 / k);
            below += c;
        }

        let sizes: Vec<f64> = levels.iter().map(|l| l.mean_v).collect();
        let prims: Vec<f64> = levels.iter().map(|l| l.mean_prim).collect();
        let m0 = argmax(&prims);
        Ok(Self {
            kind: cfg.kind,
            sample_size: runs.len() as u64,
            n_max: cfg.n_max,
            master_seed: cfg.master_seed,
            levels,
            heights,
            censored,
            mean_height: height_sum / k,
            n0: argmax(&sizes),
            n0_prime: sizes.iter().position(|&x| x < 1.0).map(|n| n as u32),
            m0,
            m0_prime: prims
                .iter()
                .skip(m0 as usize + 1)
                .position(|&x| x < 1.0)
                .map(|i| m0 + 1 + i as u32),
            extinction_cdf,
        })
    }
}

/// Builds every tree of the ensemble (in parallel) and aggregates in run order.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<StatsReport, StatsError> {
    if cfg.sample_size == 0 {
        return Err(StatsError::EmptySample);
    }
    let runs: Vec<RunSummary> = (0..cfg.sample_size)
        .into_par_iter()
        .map(|i| run_one(cfg, i))
        .collect::<Result<_, _>>()?;
    StatsReport::aggregate(cfg, &runs)
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// `(⟨log x⟩, log⟨x⟩)`. The first is formed as `log⟨x⟩ + ⟨log(x/⟨x⟩)⟩` so
/// that equal samples give exact equality instead of rounding noise.
fn log_moments(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let log_mean = mean.ln();
    let deficit: f64 = xs.iter().map(|&x| (x / mean).ln()).sum();
    Some((log_mean + deficit / k, log_mean))
}

fn argmax(xs: &[f64]) -> u32 {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best as u32
}
