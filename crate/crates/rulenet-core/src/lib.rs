//! Core model for random rule-based reaction networks over words.
//!
//! A realization of the network is a quenched Bernoulli field over reaction
//! identities. Anabolic reactions attach a food word to a reactant; catabolic
//! reactions cut one bond of a reactant. Everything downstream (trees,
//! networks, ensembles) reads the field through [`ReactionOracle`].

mod error;
mod model;
mod oracle;
mod reaction;
mod word;

pub use error::CoreError;
pub use model::{Foodset, Kind, ModelParams, Variant};
pub use oracle::{derive_seed, ExplicitOracle, HashOracle, ReactionOracle};
pub use reaction::{
    bernoulli_param, complexity_index, is_decomposable, is_reactant_anabolic, strict_subwords,
    subwords, ReactionId,
};
pub use word::{Alphabet, Word};
