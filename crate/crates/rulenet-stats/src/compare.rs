use rulenet_core::{Kind, ModelParams};
use rulenet_gw::{corrected_mean_k1_levels, GwSchedule};
use serde::{Deserialize, Serialize};

use crate::{StatsError, StatsReport};

/// Theory values for one level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelPrediction {
    pub level: u32,
    /// Uncorrected `m_{1,n}`.
    pub plain: f64,
    pub k0: f64,
    /// Absent when the k=1 enumeration does not support the alphabet size.
    pub k1: Option<f64>,
    pub primitives: f64,
}

/// Predictions for levels `0..=n_max`.
pub fn level_predictions(kind: Kind, params: &ModelParams, n_max: u32) -> Vec<LevelPrediction> {
    let s = GwSchedule::for_params(kind, params);
    let k1 = corrected_mean_k1_levels(&s, n_max).ok();
    (0..=n_max)
        .map(|n| LevelPrediction {
            level: n,
            plain: s.mean_level_size(n),
            k0: s.corrected_mean_k0(n),
            k1: k1.as_ref().map(|v| v[n as usize]),
            primitives: s.primitive_mean(n),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub level: u32,
    pub empirical: f64,
    pub plain: f64,
    pub k0: f64,
    pub k1: Option<f64>,
    /// `empirical / prediction`.
    pub ratio_plain: f64,
    pub ratio_k0: f64,
    pub ratio_k1: Option<f64>,
}

/// Agreement summary for one prediction column.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionSummary {
    /// `argmax(prediction) − argmax(empirical)`.
    pub level_offset: i64,
    /// Over resolved levels (empirical mean at least one).
    pub max_abs_log_ratio: f64,
    pub mean_abs_log_ratio: f64,
    pub resolved_levels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub plain: PredictionSummary,
    pub k0: PredictionSummary,
    pub k1: Option<PredictionSummary>,
}

fn argmax(xs: impl Iterator<Item = f64>) -> i64 {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, x) in xs.enumerate() {
        if x > best.1 {
            best = (i, x);
        }
    }
    best.0 as i64
}

fn summarize(empirical: &[f64], predicted: &[f64]) -> PredictionSummary {
    let logs: Vec<f64> = empirical
        .iter()
        .zip(predicted)
        .filter(|(&e, &p)| e >= 1.0 && p > 0.0)
        .map(|(e, p)| (e / p).ln().abs())
        .collect();
    let resolved_levels = logs.len();
    PredictionSummary {
        level_offset: argmax(predicted.iter().copied()) - argmax(empirical.iter().copied()),
        max_abs_log_ratio: logs.iter().copied().fold(0.0, f64::max),
        mean_abs_log_ratio: if resolved_levels > 0 {
            logs.iter().sum::<f64>() / resolved_levels as f64
        } else {
            0.0
        },
        resolved_levels,
    }
}

/// Per-level ratios of empirical mean level sizes to the predictions.
pub fn compare_report(
    stats: &StatsReport,
    predictions: &[LevelPrediction],
) -> Result<Comparison, StatsError> {
    compare_means(&stats.mean_sizes(), predictions)
}

/// [`compare_report`] on a bare vector of empirical means indexed by level.
pub fn compare_means(
    empirical: &[f64],
    predictions: &[LevelPrediction],
) -> Result<Comparison, StatsError> {
    if empirical.len() != predictions.len() {
        return Err(StatsError::Shape(format!(
            "{} empirical levels vs {} predicted",
            empirical.len(),
            predictions.len()
        )));
    }
    if let Some((n, p)) = predictions
        .iter()
        .enumerate()
        .find(|(n, p)| p.level as usize != *n)
    {
        return Err(StatsError::Shape(format!(
            "prediction row {n} has level {}",
            p.level
        )));
    }
    let rows: Vec<ComparisonRow> = empirical
        .iter()
        .zip(predictions)
        .map(|(&e, p)| ComparisonRow {
            level: p.level,
            empirical: e,
            plain: p.plain,
            k0: p.k0,
            k1: p.k1,
            ratio_plain: e / p.plain,
            ratio_k0: e / p.k0,
            ratio_k1: p.k1.map(|k| e / k),
        })
        .collect();
    let col = |f: fn(&LevelPrediction) -> f64| predictions.iter().map(f).collect::<Vec<_>>();
    let k1 = predictions
        .iter()
        .map(|p| p.k1)
        .collect::<Option<Vec<f64>>>();
    Ok(Comparison {
        rows,
        plain: summarize(empirical, &col(|p| p.plain)),
        k0: summarize(empirical, &col(|p| p.k0)),
        k1: k1.map(|v| summarize(empirical, &v)),
    })
}
