//! Trees against exhaustive word classification over the same field.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rulenet_core::{
    derive_seed, strict_subwords, subwords, Alphabet, Foodset, HashOracle, ModelParams,
    ReactionOracle, Word,
};
use rulenet_tree::{build_anabolic_tree, build_fragmentation_tree, LevelTree};

fn fires_ana(o: &HashOracle, foods: &[Word], x: &Word) -> bool {
    foods.iter().any(|&f| o.anabolic(f, *x))
}

fn fires_cata(o: &HashOracle, x: &Word) -> bool {
    (1..x.len() as u32).any(|j| o.catabolic(*x, j))
}

fn brute(
    a: Alphabet,
    n_max: u32,
    fires: impl Fn(&Word) -> bool,
) -> (Vec<BTreeSet<Word>>, Vec<BTreeSet<Word>>) {
    let mut red = Vec::new();
    let mut prim = Vec::new();
    for n in 0..=n_max {
        let mut r = BTreeSet::new();
        let mut p = BTreeSet::new();
        for x in a.words_of_level(n) {
            let strict_clean = strict_subwords(&x).iter().all(|s| !fires(s));
            if strict_clean {
                if fires(&x) {
                    p.insert(x);
                } else {
                    r.insert(x);
                }
            }
        }
        red.push(r);
        prim.push(p);
    }
    (red, prim)
}

fn as_sets(t: &LevelTree, n_max: u32) -> (Vec<BTreeSet<Word>>, Vec<BTreeSet<Word>>) {
    (
        (0..=n_max).map(|n| t.red_words(n).collect()).collect(),
        (0..=n_max).map(|n| t.prim_words(n).collect()).collect(),
    )
}

#[test]
fn fifty_seeds_both_kinds() {
    let a = Alphabet::new(2).unwrap();
    let n_max = 6;
    for (i, (p, q)) in [(0.05, 0.05), (0.15, 0.1), (0.3, 0.25)]
        .into_iter()
        .enumerate()
    {
        let prm = ModelParams::model_i(a, Foodset::atoms(&a), p, q).unwrap();
        for r in 0..50u64 {
            let seed = derive_seed(i as u64, r);
            let o = HashOracle::new(&prm, seed);
            let foods = prm.foodset.foods().to_vec();
            let ana = build_anabolic_tree(&prm, seed, n_max).unwrap();
            assert_eq!(
                as_sets(&ana, n_max),
                brute(a, n_max, |x| fires_ana(&o, &foods, x)),
                "ana seed {seed}"
            );
            let cata = build_fragmentation_tree(&prm, seed, n_max).unwrap();
            assert_eq!(
                as_sets(&cata, n_max),
                brute(a, n_max, |x| fires_cata(&o, x)),
                "cata seed {seed}"
            );
        }
    }
}

#[test]
fn model_ii_matches_brute_force() {
    let a = Alphabet::new(3).unwrap();
    let prm = ModelParams::model_ii(a, Foodset::single_atom(&a), 0.6, 0.6, 0.7).unwrap();
    for seed in 0..10 {
        let o = HashOracle::new(&prm, seed);
        let foods = prm.foodset.foods().to_vec();
        let t = build_anabolic_tree(&prm, seed, 4).unwrap();
        assert_eq!(as_sets(&t, 4), brute(a, 4, |x| fires_ana(&o, &foods, x)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn red_and_blue_definitions(seed in any::<u64>(), p in 0.02f64..0.4) {
        let a = Alphabet::new(3).unwrap();
        let prm = ModelParams::model_i(a, Foodset::single_atom(&a), p, p).unwrap();
        let o = HashOracle::new(&prm, seed);
        let food = a.atom(0).unwrap();
        let t = build_anabolic_tree(&prm, seed, 7).unwrap();
        for n in 0..=7 {
            for x in t.red_words(n) {
                prop_assert!(subwords(&x).iter().all(|s| !o.anabolic(food, *s)));
            }
            for x in t.prim_words(n) {
                prop_assert!(o.anabolic(food, x));
                prop_assert!(strict_subwords(&x).iter().all(|s| !o.anabolic(food, *s)));
            }
        }
        let f = build_fragmentation_tree(&prm, seed, 7).unwrap();
        for n in 0..=7 {
            for x in f.red_words(n) {
                prop_assert!(subwords(&x).iter().all(|s| !fires_cata(&o, s)));
            }
            for x in f.prim_words(n) {
                prop_assert!(fires_cata(&o, &x));
                prop_assert!(strict_subwords(&x).iter().all(|s| !fires_cata(&o, s)));
            }
        }
    }

    #[test]
    fn raising_p_shrinks_red_levels(seed in any::<u64>(), p1 in 0.01f64..0.3, dp in 0.0f64..0.3, z in 0.5f64..1.0) {
        let a = Alphabet::new(3).unwrap();
        let lo = ModelParams::new(a, Foodset::single_atom(&a), p1, p1, z).unwrap();
        let hi = ModelParams::new(a, Foodset::single_atom(&a), p1 + dp, p1 + dp, z).unwrap();
        for (tl, th) in [
            (build_anabolic_tree(&lo, seed, 6).unwrap(), build_anabolic_tree(&hi, seed, 6).unwrap()),
            (build_fragmentation_tree(&lo, seed, 6).unwrap(), build_fragmentation_tree(&hi, seed, 6).unwrap()),
        ] {
            for n in 0..=6 {
                let l: BTreeSet<Word> = tl.red_words(n).collect();
                prop_assert!(th.red_words(n).all(|w| l.contains(&w)));
            }
        }
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let a = Alphabet::new(3).unwrap();
    let prm = ModelParams::model_i(a, Foodset::single_atom(&a), 0.08, 0.08).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    for seed in 0..3 {
        let t1 = single.install(|| build_anabolic_tree(&prm, seed, 16).unwrap());
        let t4 = many.install(|| build_anabolic_tree(&prm, seed, 16).unwrap());
        assert_eq!(t1, t4);
        let f1 = single.install(|| build_fragmentation_tree(&prm, seed, 12).unwrap());
        let f4 = many.install(|| build_fragmentation_tree(&prm, seed, 12).unwrap());
        assert_eq!(f1, f4);
    }
}
