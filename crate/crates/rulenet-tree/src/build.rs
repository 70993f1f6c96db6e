use rayon::prelude::*;
use rulenet_core::{Alphabet, HashOracle, Kind, ModelParams, ReactionOracle, Word};

use crate::{LevelTree, PrimMeta, TreeError};

/// Default cap on red plus blue vertices summed over levels.
pub const DEFAULT_BUDGET: usize = 100_000_000;

/// Parents handled per budget check.
const BATCH: usize = 1 << 16;
/// Parents per parallel work item.
const CHUNK: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub n_max: u32,
    pub budget: usize,
}

impl BuildOptions {
    pub fn new(n_max: u32) -> Self {
        Self {
            n_max,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChildClass {
    /// Kept in the tree.
    Red,
    /// Reactant of a primitive reaction.
    Blue(PrimMeta),
    /// Reactant of a derived reaction only; dropped.
    Derived,
}

/// Classifies `x` assuming `x` minus its last atom is red (or `x` is an atom).
pub fn classify_anabolic(oracle: &impl ReactionOracle, foods: &[Word], x: Word) -> ChildClass {
    for k in 1..x.len() {
        let s = x.suffix(k);
        if foods.iter().any(|&f| oracle.anabolic(f, s)) {
            return ChildClass::Derived;
        }
    }
    let meta: PrimMeta = foods
        .iter()
        .enumerate()
        .filter(|(_, &f)| oracle.anabolic(f, x))
        .map(|(i, _)| i as u16)
        .collect();
    if meta.is_empty() {
        ChildClass::Red
    } else {
        ChildClass::Blue(meta)
    }
}

/// Catabolic analogue of [`classify_anabolic`]: scans (suffix, cut) pairs.
pub fn classify_catabolic(oracle: &impl ReactionOracle, x: Word) -> ChildClass {
    for k in 2..x.len() {
        let s = x.suffix(k);
        if (1..k as u32).any(|j| oracle.catabolic(s, j)) {
            return ChildClass::Derived;
        }
    }
    let meta: PrimMeta = (1..x.len() as u32)
        .filter(|&j| oracle.catabolic(x, j))
        .map(|j| j as u16)
        .collect();
    if meta.is_empty() {
        ChildClass::Red
    } else {
        ChildClass::Blue(meta)
    }
}

pub fn build_anabolic_tree(
    params: &ModelParams,
    seed: u64,
    n_max: u32,
) -> Result<LevelTree, TreeError> {
    let oracle = HashOracle::new(params, seed);
    build_anabolic_tree_with(params, &oracle, BuildOptions::new(n_max))
}

pub fn build_anabolic_tree_with(
    params: &ModelParams,
    oracle: &impl ReactionOracle,
    opts: BuildOptions,
) -> Result<LevelTree, TreeError> {
    let foods = params.foodset.foods();
    build(Kind::Anabolic, params.alphabet, opts, |x| {
        classify_anabolic(oracle, foods, x)
    })
}

pub fn build_fragmentation_tree(
    params: &ModelParams,
    seed: u64,
    n_max: u32,
) -> Result<LevelTree, TreeError> {
    let oracle = HashOracle::new(params, seed);
    build_fragmentation_tree_with(params, &oracle, BuildOptions::new(n_max))
}

pub fn build_fragmentation_tree_with(
    params: &ModelParams,
    oracle: &impl ReactionOracle,
    opts: BuildOptions,
) -> Result<LevelTree, TreeError> {
    build(Kind::Catabolic, params.alphabet, opts, |x| {
        classify_catabolic(oracle, x)
    })
}

#[derive(Default)]
struct LevelOut {
    red: Vec<u128>,
    prim: Vec<u128>,
    meta: Vec<PrimMeta>,
}

impl LevelOut {
    fn append(&mut self, mut other: LevelOut) {
        self.red.append(&mut other.red);
        self.prim.append(&mut other.prim);
        self.meta.append(&mut other.meta);
    }

    fn len(&self) -> usize {
        self.red.len() + self.prim.len()
    }
}

fn expand<F>(alphabet: Alphabet, level: u32, parents: &[u128], classify: &F) -> LevelOut
where
    F: Fn(Word) -> ChildClass + Sync,
{
    let w = alphabet.width() as u32;
    let len = level as usize + 1;
    let mut out = LevelOut::default();
    for &parent in parents {
        for b in 0..alphabet.size() {
            let code = (parent << w) | b as u128;
            match classify(alphabet.from_code(len, code)) {
                ChildClass::Red => out.red.push(code),
                ChildClass::Blue(m) => {
                    out.prim.push(code);
                    out.meta.push(m);
                }
                ChildClass::Derived => {}
            }
        }
    }
    out
}

fn build<F>(
    kind: Kind,
    alphabet: Alphabet,
    opts: BuildOptions,
    classify: F,
) -> Result<LevelTree, TreeError>
where
    F: Fn(Word) -> ChildClass + Sync,
{
    if opts.n_max > alphabet.max_level() {
        return Err(TreeError::Capacity {
            n_max: opts.n_max,
            max_level: alphabet.max_level(),
        });
    }
    let mut tree = LevelTree::new(kind, alphabet, opts.n_max);
    let mut total = 0usize;

    // Atoms have no parent; classify them directly.
    let mut level0 = LevelOut::default();
    for a in alphabet.atoms() {
        match classify(a) {
            ChildClass::Red => level0.red.push(a.code()),
            ChildClass::Blue(m) => {
                level0.prim.push(a.code());
                level0.meta.push(m);
            }
            ChildClass::Derived => {}
        }
    }
    total += level0.len();
    tree.red.push(level0.red);
    tree.prim.push(level0.prim);
    tree.prim_meta.push(level0.meta);

    for level in 1..=opts.n_max {
        let parents = &tree.red[level as usize - 1];
        if parents.is_empty() {
            break;
        }
        let mut out = LevelOut::default();
        for batch in parents.chunks(BATCH) {
            let parts: Vec<LevelOut> = batch
                .par_chunks(CHUNK)
                .map(|c| expand(alphabet, level, c, &classify))
                .collect();
            for part in parts {
                out.append(part);
            }
            if total + out.len() > opts.budget {
                return Err(TreeError::Budget {
                    level,
                    budget: opts.budget,
                    partial: Box::new(tree),
                });
            }
        }
        total += out.len();
        tree.red.push(out.red);
        tree.prim.push(out.prim);
        tree.prim_meta.push(out.meta);
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rulenet_core::{ExplicitOracle, Foodset};

    fn params(size: u32) -> ModelParams {
        let a = Alphabet::new(size).unwrap();
        ModelParams::model_i(a, Foodset::single_atom(&a), 0.1, 0.1).unwrap()
    }

    #[test]
    fn silent_field_gives_maximal_trees() {
        let prm = params(3);
        let o = ExplicitOracle::empty();
        let t = build_anabolic_tree_with(&prm, &o, BuildOptions::new(5)).unwrap();
        assert_eq!(t.level_sizes(), vec![3, 9, 27, 81, 243, 729]);
        assert!(t.prim_counts().iter().all(|&c| c == 0));
        assert!(t.height().is_censored());
        let f = build_fragmentation_tree_with(&prm, &o, BuildOptions::new(4)).unwrap();
        assert_eq!(f.level_sizes(), vec![3, 9, 27, 81, 243]);
    }

    #[test]
    fn atom_firing_makes_it_blue() {
        let prm = params(2);
        let a = prm.alphabet;
        let o = ExplicitOracle::empty().fire_anabolic(a.atom(0).unwrap(), a.atom(1).unwrap());
        let t = build_anabolic_tree_with(&prm, &o, BuildOptions::new(3)).unwrap();
        assert_eq!(t.level_sizes(), vec![1, 1, 1, 1]);
        assert_eq!(t.prim_counts(), vec![1, 0, 0, 0]);
        let meta: Vec<_> = t
            .prims_with_meta(0)
            .map(|(w, m)| (w.to_string(), m.to_vec()))
            .collect();
        assert_eq!(meta, vec![("b".to_string(), vec![0u16])]);
    }

    #[test]
    fn capacity_and_budget() {
        let prm = params(3);
        let o = ExplicitOracle::empty();
        assert!(matches!(
            build_anabolic_tree_with(&prm, &o, BuildOptions::new(64)),
            Err(TreeError::Capacity { .. })
        ));
        let err =
            build_anabolic_tree_with(&prm, &o, BuildOptions::new(10).with_budget(100)).unwrap_err();
        let partial = err.partial().unwrap();
        assert_eq!(partial.built_levels(), 3);
        assert!(matches!(err, TreeError::Budget { level: 3, .. }));
    }

    #[test]
    fn heights() {
        let prm = params(2);
        let a = prm.alphabet;
        let f = a.atom(0).unwrap();
        let all = ExplicitOracle::empty()
            .fire_anabolic(f, a.atom(0).unwrap())
            .fire_anabolic(f, a.atom(1).unwrap());
        let t = build_anabolic_tree_with(&prm, &all, BuildOptions::new(3)).unwrap();
        assert_eq!(t.height(), crate::Height::Empty);
        assert_eq!(t.height().reported(), -1);
        assert_eq!(t.extinct_at(), Some(0));
    }
}
