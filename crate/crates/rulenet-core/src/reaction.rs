use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{CoreError, ModelParams, ReactionOracle, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReactionId {
    /// `food + reactant → reactant·food`.
    Anabolic { food: Word, reactant: Word },
    /// `reactant → reactant[..cut] + reactant[cut..]`.
    Catabolic { reactant: Word, cut: u32 },
}

impl ReactionId {
    pub fn anabolic(food: Word, reactant: Word) -> Self {
        Self::Anabolic { food, reactant }
    }

    pub fn catabolic(reactant: Word, cut: u32) -> Result<Self, CoreError> {
        if cut == 0 || cut as usize >= reactant.len() {
            return Err(CoreError::InvalidCut {
                cut,
                len: reactant.len(),
            });
        }
        Ok(Self::Catabolic { reactant, cut })
    }

    /// Complexity ℓ of the reaction: total level of the reactants.
    pub fn complexity(&self) -> u32 {
        match self {
            Self::Anabolic { food, reactant } => food.level() + reactant.level(),
            Self::Catabolic { reactant, .. } => reactant.level(),
        }
    }
}

/// Acceptance probability `p·z^{|F|+|X|}` (anabolic) or `q·z^{|X|}` (catabolic).
pub fn bernoulli_param(params: &ModelParams, rid: &ReactionId) -> f64 {
    let base = match rid {
        ReactionId::Anabolic { .. } => params.p,
        ReactionId::Catabolic { .. } => params.q,
    };
    if params.z == 1.0 {
        base
    } else {
        base * params.z.powi(rid.complexity() as i32)
    }
}

/// All distinct contiguous factors, `x` included.
pub fn subwords(x: &Word) -> BTreeSet<Word> {
    let n = x.len();
    let mut out = BTreeSet::new();
    for k in 1..=n {
        for start in 0..=n - k {
            out.insert(x.subword(start, k));
        }
    }
    out
}

/// All distinct contiguous factors other than `x` itself.
pub fn strict_subwords(x: &Word) -> BTreeSet<Word> {
    let mut out = subwords(x);
    out.remove(x);
    out
}

/// Whether `food + x` belongs to the completed network, i.e. some factor of
/// `x` reacts with `food`.
pub fn is_reactant_anabolic(oracle: &impl ReactionOracle, food: Word, x: Word) -> bool {
    subwords(&x).into_iter().any(|s| oracle.anabolic(food, s))
}

/// Whether some factor of `x` has a firing cut.
pub fn is_decomposable(oracle: &impl ReactionOracle, x: Word) -> bool {
    subwords(&x)
        .into_iter()
        .any(|s| (1..s.len() as u32).any(|j| oracle.catabolic(s, j)))
}

/// Smallest complexity among accepted reactions from which `rid` derives;
/// `None` when `rid` is not in the completed network.
pub fn complexity_index(oracle: &impl ReactionOracle, rid: &ReactionId) -> Option<u32> {
    match *rid {
        ReactionId::Anabolic { food, reactant } => subwords(&reactant)
            .into_iter()
            .filter(|s| oracle.anabolic(food, *s))
            .map(|s| food.level() + s.level())
            .min(),
        ReactionId::Catabolic { reactant, cut } => {
            let n = reactant.len();
            let cut = cut as usize;
            let mut best: Option<u32> = None;
            // Factors [start, start+k) that straddle the cut bond, with the
            // cut expressed relative to the factor.
            for start in 0..cut {
                for end in cut + 1..=n {
                    let s = reactant.subword(start, end - start);
                    if oracle.catabolic(s, (cut - start) as u32) {
                        best = Some(best.map_or(s.level(), |b| b.min(s.level())));
                    }
                }
            }
            best
        }
    }
}
