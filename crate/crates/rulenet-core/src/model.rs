use serde::{Deserialize, Serialize};

use crate::{Alphabet, CoreError, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Constant acceptance probabilities (`z = 1`).
    ModelI,
    /// Acceptance damped by `z` raised to the reaction complexity.
    ModelII,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Anabolic,
    Catabolic,
}

/// Non-empty set of food words, kept in insertion order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Foodset {
    foods: Vec<Word>,
}

impl Foodset {
    pub fn new(foods: Vec<Word>) -> Result<Self, CoreError> {
        if foods.is_empty() {
            return Err(CoreError::EmptyFoodset);
        }
        for (i, f) in foods.iter().enumerate() {
            if foods[..i].contains(f) {
                return Err(CoreError::DuplicateFood(f.to_string()));
            }
            if f.width() != foods[0].width() {
                return Err(CoreError::AlphabetMismatch);
            }
        }
        Ok(Self { foods })
    }

    /// The single food made of the first atom.
    pub fn single_atom(alphabet: &Alphabet) -> Self {
        Self {
            foods: vec![alphabet.atom(0).expect("alphabet has at least two atoms")],
        }
    }

    /// Every atom is a food.
    pub fn atoms(alphabet: &Alphabet) -> Self {
        Self {
            foods: alphabet.atoms().collect(),
        }
    }

    pub fn foods(&self) -> &[Word] {
        &self.foods
    }

    pub fn len(&self) -> usize {
        self.foods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.foods.is_empty()
    }

    pub fn levels(&self) -> Vec<u32> {
        self.foods.iter().map(Word::level).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alphabet: Alphabet,
    pub foodset: Foodset,
    pub p: f64,
    pub q: f64,
    pub z: f64,
    pub variant: Variant,
}

impl ModelParams {
    /// Validates the parameters and infers the variant from `z`.
    pub fn new(
        alphabet: Alphabet,
        foodset: Foodset,
        p: f64,
        q: f64,
        z: f64,
    ) -> Result<Self, CoreError> {
        let variant = if z == 1.0 {
            Variant::ModelI
        } else {
            Variant::ModelII
        };
        Self::with_variant(alphabet, foodset, p, q, z, variant)
    }

    pub fn with_variant(
        alphabet: Alphabet,
        foodset: Foodset,
        p: f64,
        q: f64,
        z: f64,
        variant: Variant,
    ) -> Result<Self, CoreError> {
        for (name, value) in [("p", p), ("q", q)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(CoreError::ProbabilityOutOfRange { name, value });
            }
        }
        if !(z > 0.0 && z <= 1.0) {
            return Err(CoreError::FugacityOutOfRange(z));
        }
        if (variant == Variant::ModelI) != (z == 1.0) {
            return Err(CoreError::VariantMismatch(z));
        }
        if foodset
            .foods()
            .iter()
            .any(|f| f.width() != alphabet.width())
        {
            return Err(CoreError::AlphabetMismatch);
        }
        if foodset
            .foods()
            .iter()
            .any(|f| f.atoms().iter().any(|&a| a >= alphabet.size()))
        {
            return Err(CoreError::AlphabetMismatch);
        }
        Ok(Self {
            alphabet,
            foodset,
            p,
            q,
            z,
            variant,
        })
    }

    pub fn model_i(
        alphabet: Alphabet,
        foodset: Foodset,
        p: f64,
        q: f64,
    ) -> Result<Self, CoreError> {
        Self::with_variant(alphabet, foodset, p, q, 1.0, Variant::ModelI)
    }

    pub fn model_ii(
        alphabet: Alphabet,
        foodset: Foodset,
        p: f64,
        q: f64,
        z: f64,
    ) -> Result<Self, CoreError> {
        Self::with_variant(alphabet, foodset, p, q, z, Variant::ModelII)
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet.size()
    }
}
