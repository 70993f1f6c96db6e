//! Monte-Carlo ensembles over seeds, per-level statistics, theory comparison
//! tables, the Model II transition scan and the CSV/JSON file formats.

mod compare;
mod ensemble;
mod fit;
mod gw_mc;
pub mod output;
mod scan;

pub use compare::{
    compare_means, compare_report, level_predictions, Comparison, ComparisonRow, LevelPrediction,
    PredictionSummary,
};
pub use ensemble::{
    run_ensemble, run_one, EnsembleConfig, HeightBin, LevelStats, RunSummary, StatsReport,
};
pub use fit::{fit_line, LineFit};
pub use gw_mc::{gw_extinction_mc, gw_level_means_mc, McEstimate};
pub use scan::{
    model2_transition_scan, RunOutcome, ScanClass, ScanConfig, ScanPoint, TransitionScan,
};

use rulenet_tree::TreeError;

#[derive(Debug, thiserror::Error)]
pub enum StatsError {
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("run {index} (seed {seed:#018x}) failed: {source}")]
    Run {
        index: u64,
        seed: u64,
        #[source]
        source: TreeError,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("z grid value {0} outside (0, 1)")]
    Grid(f64),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl StatsError {
    /// The run error is a memory-budget overflow.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            StatsError::Run {
                source: TreeError::Budget { .. },
                ..
            }
        )
    }

    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            StatsError::Run {
                source: TreeError::Capacity { .. },
                ..
            }
        )
    }
}
