use std::collections::HashSet;

use crate::{ModelParams, ReactionId, Word};

/// Read access to one realization of the acceptance field ω.
///
/// Implementations must be pure: the same reaction always gets the same bit.
pub trait ReactionOracle: Sync {
    /// ω for `food + reactant`, attaching the food on the right.
    fn anabolic(&self, food: Word, reactant: Word) -> bool;
    /// ω for cutting `reactant` between atoms `cut` and `cut + 1`.
    fn catabolic(&self, reactant: Word, cut: u32) -> bool;

    fn omega(&self, rid: &ReactionId) -> bool {
        match *rid {
            ReactionId::Anabolic { food, reactant } => self.anabolic(food, reactant),
            ReactionId::Catabolic { reactant, cut } => self.catabolic(reactant, cut),
        }
    }
}

impl<T: ReactionOracle + ?Sized> ReactionOracle for &T {
    fn anabolic(&self, food: Word, reactant: Word) -> bool {
        (**self).anabolic(food, reactant)
    }
    fn catabolic(&self, reactant: Word, cut: u32) -> bool {
        (**self).catabolic(reactant, cut)
    }
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const TAG_ANABOLIC: u64 = 0x616e_6162;
const TAG_CATABOLIC: u64 = 0x6361_7461;

fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn absorb(h: u64, v: u64) -> u64 {
    mix64(h.rotate_left(23) ^ v.wrapping_add(GOLDEN))
}

fn absorb_word(h: u64, w: Word) -> u64 {
    let code = w.code();
    let h = absorb(h, w.len() as u64);
    let h = absorb(h, code as u64);
    absorb(h, (code >> 64) as u64)
}

/// Stable per-run seed from a master seed and a run index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    absorb(absorb(mix64(master ^ GOLDEN), index), 0x7275_6e73)
}

fn to_unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Counter-based field: `ω = [u(seed, rid) < param(rid)]` with `u` a hash of
/// the reaction identity. Since `u` ignores the parameters, raising p, q or
/// z can only switch bits on.
#[derive(Clone, Debug)]
pub struct HashOracle {
    seed: u64,
    p: f64,
    q: f64,
    z_pow: Vec<f64>,
}

impl HashOracle {
    pub fn new(params: &ModelParams, seed: u64) -> Self {
        let levels = 2 * params.alphabet.capacity() + 2;
        let z_pow = (0..levels).map(|k| params.z.powi(k as i32)).collect();
        Self {
            seed,
            p: params.p,
            q: params.q,
            z_pow,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn zp(&self, k: u32) -> f64 {
        self.z_pow.get(k as usize).copied().unwrap_or(0.0)
    }

    pub fn anabolic_uniform(&self, food: Word, reactant: Word) -> f64 {
        let h = absorb(mix64(self.seed ^ GOLDEN), TAG_ANABOLIC);
        to_unit(absorb_word(absorb_word(h, food), reactant))
    }

    pub fn catabolic_uniform(&self, reactant: Word, cut: u32) -> f64 {
        let h = absorb(mix64(self.seed ^ GOLDEN), TAG_CATABOLIC);
        to_unit(absorb(absorb_word(h, reactant), cut as u64))
    }

    /// The hash-derived uniform behind a reaction's bit.
    pub fn uniform(&self, rid: &ReactionId) -> f64 {
        match *rid {
            ReactionId::Anabolic { food, reactant } => self.anabolic_uniform(food, reactant),
            ReactionId::Catabolic { reactant, cut } => self.catabolic_uniform(reactant, cut),
        }
    }
}

impl ReactionOracle for HashOracle {
    fn anabolic(&self, food: Word, reactant: Word) -> bool {
        let param = self.p * self.zp(food.level() + reactant.level());
        self.anabolic_uniform(food, reactant) < param
    }

    fn catabolic(&self, reactant: Word, cut: u32) -> bool {
        let param = self.q * self.zp(reactant.level());
        self.catabolic_uniform(reactant, cut) < param
    }
}

/// Field given by explicit lists of firing reactions; everything else is 0.
#[derive(Clone, Debug, Default)]
pub struct ExplicitOracle {
    anabolic: HashSet<(Word, Word)>,
    catabolic: HashSet<(Word, u32)>,
}

impl ExplicitOracle {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn fire_anabolic(mut self, food: Word, reactant: Word) -> Self {
        self.anabolic.insert((food, reactant));
        self
    }

    pub fn fire_catabolic(mut self, reactant: Word, cut: u32) -> Self {
        self.catabolic.insert((reactant, cut));
        self
    }

    pub fn firing_anabolic(&self) -> impl Iterator<Item = &(Word, Word)> {
        self.anabolic.iter()
    }
}

impl ReactionOracle for ExplicitOracle {
    fn anabolic(&self, food: Word, reactant: Word) -> bool {
        self.anabolic.contains(&(food, reactant))
    }

    fn catabolic(&self, reactant: Word, cut: u32) -> bool {
        self.catabolic.contains(&(reactant, cut))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{bernoulli_param, Alphabet, Foodset};
    use proptest::prelude::*;

    fn params(p: f64, q: f64, z: f64) -> ModelParams {
        let a = Alphabet::new(3).unwrap();
        ModelParams::new(a, Foodset::single_atom(&a), p, q, z).unwrap()
    }

    #[test]
    fn repeated_queries_agree() {
        let o = HashOracle::new(&params(0.5, 0.5, 1.0), 42);
        let a = Alphabet::new(3).unwrap();
        let f = a.atom(0).unwrap();
        let x = a.parse_word("abcab").unwrap();
        let first = o.anabolic(f, x);
        assert!((0..1_000_000).all(|_| o.anabolic(f, x) == first));
    }

    #[test]
    fn empirical_rate_matches_parameter() {
        let p = 0.08;
        let prm = params(p, 0.5, 1.0);
        let a = prm.alphabet;
        let f = a.atom(0).unwrap();
        let n = 100_000u32;
        let mut hits = 0u32;
        for seed in 0..(n / 27 + 1) {
            let o = HashOracle::new(&prm, seed as u64);
            for x in a.words_of_level(2) {
                hits += o.anabolic(f, x) as u32;
            }
        }
        let total = (n / 27 + 1) * 27;
        let rate = hits as f64 / total as f64;
        let sigma = (p * (1.0 - p) / total as f64).sqrt();
        assert!((rate - p).abs() < 3.0 * sigma, "rate {rate}");
    }

    #[test]
    fn kinds_and_cuts_are_separate_streams() {
        let prm = params(0.5, 0.5, 1.0);
        let o = HashOracle::new(&prm, 7);
        let a = prm.alphabet;
        let x = a.parse_word("abca").unwrap();
        let u1 = o.catabolic_uniform(x, 1);
        let u2 = o.catabolic_uniform(x, 2);
        let u3 = o.anabolic_uniform(a.atom(0).unwrap(), x);
        assert!(u1 != u2 && u1 != u3 && u2 != u3);
    }

    #[test]
    fn run_seeds_are_distinct() {
        let mut seeds: Vec<u64> = (0..10_000).map(|i| derive_seed(1, i)).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 10_000);
        assert_eq!(derive_seed(1, 5), derive_seed(1, 5));
    }

    proptest! {
        #[test]
        fn monotone_coupling(seed in any::<u64>(), p1 in 0.01f64..0.99, p2 in 0.01f64..0.99,
                             z1 in 0.05f64..1.0, z2 in 0.05f64..1.0, atoms in prop::collection::vec(0u32..3, 1..8)) {
            let (plo, phi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
            let (zlo, zhi) = if z1 < z2 { (z1, z2) } else { (z2, z1) };
            let lo = HashOracle::new(&params(plo, plo, zlo), seed);
            let hi = HashOracle::new(&params(phi, phi, zhi), seed);
            let a = Alphabet::new(3).unwrap();
            let x = a.word(&atoms).unwrap();
            let f = a.atom(1).unwrap();
            prop_assert!(!lo.anabolic(f, x) || hi.anabolic(f, x));
            for cut in 1..x.len() as u32 {
                prop_assert!(!lo.catabolic(x, cut) || hi.catabolic(x, cut));
            }
        }

        #[test]
        fn bit_is_threshold_of_uniform(seed in any::<u64>(), atoms in prop::collection::vec(0u32..3, 1..8)) {
            let prm = params(0.3, 0.4, 0.8);
            let o = HashOracle::new(&prm, seed);
            let a = prm.alphabet;
            let x = a.word(&atoms).unwrap();
            let f = a.atom(2).unwrap();
            let rid = ReactionId::Anabolic { food: f, reactant: x };
            prop_assert_eq!(o.omega(&rid), o.uniform(&rid) < bernoulli_param(&prm, &rid));
        }
    }
}
