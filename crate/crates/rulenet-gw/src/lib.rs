//! Inhomogeneous Galton-Watson comparison model for composition and
//! fragmentation trees.
//!
//! A [`GwSchedule`] is determined by the per-level silence probabilities
//! `σ_k`: the probability that a level-`k` suffix of a fresh child fires for
//! no food (anabolic) or at no cut (catabolic). From these,
//! `p_n = ∏_{k=1}^n σ_k` is the survival probability of a child at level `n`
//! and `b_n = p_{n−1}(1 − σ_n)` the probability that it becomes primitive.

mod gf;
mod k1;
mod logsize;
mod schedule;
mod sim;

pub use gf::{extinction_bounds, BoundStatus, ExtinctionEstimate, Regime};
pub use k1::{corrected_mean_k1, corrected_mean_k1_levels, k1_tmax_term, K1_MAX_ALPHABET};
pub use logsize::{average_primitive_height, LogSize, PrimitiveHeight};
pub use schedule::{Convention, GwSchedule, GwVariant};
pub use sim::{simulate_gw, GwTrajectory};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GwError {
    #[error("argument {0} outside [0, 1]")]
    Domain(f64),
    #[error("k=1 enumeration supports |A| ≤ {max}, got {size}")]
    EnumerationBound { size: u32, max: u32 },
    #[error("level must be at least {min}, got {n}")]
    Level { n: u32, min: u32 },
    #[error("variant {variant:?} does not match fugacity z = {z}")]
    Variant { variant: GwVariant, z: f64 },
}
