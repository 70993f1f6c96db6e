//! Level-by-level construction of anabolic composition trees and catabolic
//! fragmentation trees over a quenched reaction field.
//!
//! Both builders share the same skeleton: level `n` is obtained from the red
//! vertices of level `n − 1` by appending every atom and classifying the child
//! with a shortest-suffix-first scan. Only suffixes need testing because every
//! other factor of the child is a factor of its (red) parent.

mod build;
mod tree;

pub use build::{
    build_anabolic_tree, build_anabolic_tree_with, build_fragmentation_tree,
    build_fragmentation_tree_with, classify_anabolic, classify_catabolic, BuildOptions, ChildClass,
    DEFAULT_BUDGET,
};
pub use tree::{CompositionTree, FragmentationTree, Height, LevelTree, PrimMeta};

use rulenet_core::CoreError;

#[derive(Debug, thiserror::Error)]
pub enum TreeError {
    #[error("n_max {n_max} exceeds the packing capacity (max level {max_level})")]
    Capacity { n_max: u32, max_level: u32 },
    #[error("memory budget of {budget} vertices exceeded while building level {level}")]
    Budget {
        level: u32,
        budget: usize,
        partial: Box<LevelTree>,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl TreeError {
    /// The levels completed before the budget ran out, if any.
    pub fn partial(&self) -> Option<&LevelTree> {
        match self {
            TreeError::Budget { partial, .. } => Some(partial),
            _ => None,
        }
    }
}
