use rayon::prelude::*;
use rulenet_core::derive_seed;
use rulenet_gw::{simulate_gw, GwSchedule, GwTrajectory};
use serde::{Deserialize, Serialize};

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
}

impl McEstimate {
    fn of(xs: impl Iterator<Item = f64>) -> Self {
        let xs: Vec<f64> = xs.collect();
        let k = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / k;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            stderr: (var / k).sqrt(),
        }
    }

    /// `|mean − value| ≤ sigmas · stderr`.
    pub fn within(&self, value: f64, sigmas: f64) -> bool {
        (self.mean - value).abs() <= sigmas * self.stderr
    }
}

fn trajectories(
    schedule: &GwSchedule,
    runs: u64,
    n_max: u32,
    master_seed: u64,
) -> Vec<GwTrajectory> {
    (0..runs)
        .into_par_iter()
        .map(|i| simulate_gw(schedule, derive_seed(master_seed, i), n_max))
        .collect()
}

/// Fraction of simulated processes with `Z_n = 0`, for `n = 0..=n_max`.
pub fn gw_extinction_mc(
    schedule: &GwSchedule,
    runs: u64,
    n_max: u32,
    master_seed: u64,
) -> Vec<McEstimate> {
    let t = trajectories(schedule, runs, n_max, master_seed);
    (0..=n_max as usize)
        .map(|n| McEstimate::of(t.iter().map(|r| f64::from(u8::from(r.extinct_by(n))))))
        .collect()
}

/// Mean `Z_n` of the simulated process, for `n = 0..=n_max`.
pub fn gw_level_means_mc(
    schedule: &GwSchedule,
    runs: u64,
    n_max: u32,
    master_seed: u64,
) -> Vec<McEstimate> {
    let t = trajectories(schedule, runs, n_max, master_seed);
    (0..=n_max as usize)
        .map(|n| McEstimate::of(t.iter().map(|r| r.sizes[n] as f64)))
        .collect()
}
