//! Reaction networks induced by a realization of the acceptance field.
//!
//! The anabolic network links `X` to `X·F` and `F·X` under the concatenation
//! product rule. The catabolic side is analysed through its fragmentation
//! products and level shifts.

mod anabolic;
mod catabolic;
mod component;
mod predict;

pub use anabolic::{
    build_anabolic_network, build_anabolic_network_with, AnabolicNetwork, ComponentInfo, Edge,
    Side, DEFAULT_MAX_VERTICES,
};
pub use catabolic::{
    frag_product_prob, isolated_catabolic_counts, isolated_catabolic_slope, level_shift_analysis,
    CataPhase, CatabolicNetworkReport, FragProduct, DEFAULT_TAIL_LEN,
};
pub use component::{
    no_two_embedded_paths, no_two_paths, primitive_component_prob, PrimitiveComponent, TwoPaths,
};
pub use predict::{isolated_prob, predicted_slopes, two_molecule_prob, NetworkSlopes};

use rulenet_core::CoreError;
use rulenet_theory::TheoryError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NetworkError {
    #[error("network would hold {vertices} vertices, limit is {limit}")]
    Capacity { vertices: u64, limit: u64 },
    #[error("level {n} exceeds the truncation level {n_max}")]
    Level { n: u32, n_max: u32 },
    #[error("word {0} is not a vertex of this network")]
    UnknownWord(String),
    #[error("primitive component formulas need the foodset to be the set of atoms")]
    FoodsetNotAtoms,
    #[error("reverse fork at {0}")]
    ReverseFork(String),
    #[error("edge {from} -> {to} is not a single-atom concatenation")]
    InvalidEdge { from: String, to: String },
    #[error("component is not connected to a single root")]
    NotConnected,
    #[error("z = {z} lies in the wrong phase (threshold 1/|A| = {threshold})")]
    Phase { z: f64, threshold: f64 },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}
