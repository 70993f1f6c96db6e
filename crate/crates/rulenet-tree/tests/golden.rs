use rulenet_core::{Alphabet, ExplicitOracle, Foodset, ModelParams};
use rulenet_tree::{build_anabolic_tree_with, BuildOptions, Height};

fn worked_example() -> (ModelParams, ExplicitOracle) {
    let a = Alphabet::new(3).unwrap();
    let prm = ModelParams::model_i(a, Foodset::single_atom(&a), 0.1, 0.1).unwrap();
    let food = a.atom(0).unwrap();
    let mut o = ExplicitOracle::empty();
    for w in ["c", "ba", "aab", "abb", "aaaa", "bbbb"] {
        o = o.fire_anabolic(food, a.parse_word(w).unwrap());
    }
    (prm, o)
}

fn names(it: impl Iterator<Item = rulenet_core::Word>) -> Vec<String> {
    it.map(|w| w.to_string()).collect()
}

#[test]
fn six_primitive_reactions() {
    let (prm, o) = worked_example();
    let t = build_anabolic_tree_with(&prm, &o, BuildOptions::new(6)).unwrap();
    let red: Vec<Vec<String>> = (0..4).map(|n| names(t.red_words(n))).collect();
    assert_eq!(
        red,
        vec![
            vec!["a", "b"],
            vec!["aa", "ab", "bb"],
            vec!["aaa", "bbb"],
            vec![]
        ]
    );
    let prim: Vec<Vec<String>> = (0..5).map(|n| names(t.prim_words(n))).collect();
    assert_eq!(
        prim,
        vec![
            vec!["c"],
            vec!["ba"],
            vec!["aab", "abb"],
            vec!["aaaa", "bbbb"],
            vec![]
        ]
    );
    assert_eq!(t.level_sizes(), vec![2, 3, 2, 0, 0, 0, 0]);
    assert_eq!(t.prim_counts(), vec![1, 1, 2, 2, 0, 0, 0]);
    assert_eq!(t.height(), Height::Finite(2));
    assert_eq!(t.extinct_at(), Some(3));
}

#[test]
fn worked_example_invariants() {
    let (prm, o) = worked_example();
    let t = build_anabolic_tree_with(&prm, &o, BuildOptions::new(6)).unwrap();
    let firing: Vec<_> = o.firing_anabolic().map(|&(_, x)| x).collect();
    for n in 0..4 {
        for w in t.red_words(n).chain(t.prim_words(n)) {
            if n > 0 {
                assert!(t.is_red(&w.prefix(w.len() - 1)), "parent closure for {w}");
            }
            for p in t.prim_words(0).chain((1..5).flat_map(|m| t.prim_words(m))) {
                if p != w {
                    assert!(!p.is_subword_of(&w), "{p} inside {w}");
                }
            }
        }
    }
    // Every firing word in the field is primitive here.
    for x in firing {
        assert!(t.is_prim(&x));
    }
}
