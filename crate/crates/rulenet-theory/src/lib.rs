//! Closed-form predictions: phase functions `ψ`, `φ`, their roots, the phase
//! of a fugacity, characteristic levels and empty-network probabilities.

mod empty;
mod levels;
mod phase;

pub use empty::{empty_network_prob, EmptyNetwork};
pub use levels::{
    characteristic_levels, model_i_levels, predicted_level_means, AsymptoticLevels,
    CharacteristicLevels, LevelMeans, ModelILevels,
};
pub use phase::{
    classify_phase, phase_report, phase_roots, Phase, PhaseClass, PhaseFunctions, PhaseReport,
    PhaseRoots,
};

use rulenet_core::CoreError;
use rulenet_gw::GwError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TheoryError {
    #[error("fugacity {0} outside (0, 1)")]
    Domain(f64),
    #[error("{0} needs a single food of level 0")]
    NotLemmaForm(&'static str),
    #[error("{level} is undefined in phase {phase:?}")]
    Undefined { level: &'static str, phase: Phase },
    #[error(transparent)]
    Params(#[from] CoreError),
    #[error(transparent)]
    Gw(#[from] GwError),
}
