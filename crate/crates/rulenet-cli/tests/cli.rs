use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rulenet_core::{Alphabet, Foodset, ModelParams};
use rulenet_network::build_anabolic_network;
use rulenet_stats::output::{self, read_csv, read_json};
use rulenet_tree::build_anabolic_tree;

fn rulenet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rulenet"))
        .args(args)
        .output()
        .expect("spawn rulenet")
}

fn ok(args: &[&str]) {
    let out = rulenet(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn code(args: &[&str]) -> i32 {
    rulenet(args).status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tree_outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        ok(&[
            "tree",
            "ana",
            "--A",
            "2",
            "--p",
            "0.1",
            "--nmax",
            "10",
            "--samples",
            "20",
            "--seed",
            "7",
            "--out",
            s(d),
        ]);
    }
    for f in ["levels.csv", "heights.csv", "summary.json"] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    // Thread count must not change the bytes.
    let c = dir.path().join("c");
    ok(&[
        "--threads",
        "1",
        "tree",
        "ana",
        "--A",
        "2",
        "--p",
        "0.1",
        "--nmax",
        "10",
        "--samples",
        "20",
        "--seed",
        "7",
        "--out",
        s(&c),
    ]);
    assert_eq!(
        fs::read(a.join("levels.csv")).unwrap(),
        fs::read(c.join("levels.csv")).unwrap()
    );
}

#[test]
fn tree_levels_match_library_runs() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "tree",
        "ana",
        "--A",
        "2",
        "--p",
        "0.2",
        "--nmax",
        "8",
        "--samples",
        "5",
        "--seed",
        "3",
        "--out",
        s(dir.path()),
    ]);
    let t = read_csv(&dir.path().join("levels.csv"), &output::LEVELS).unwrap();
    let got = t.f64s("mean_V").unwrap();
    let params = ModelParams::model_i(
        Alphabet::new(2).unwrap(),
        Foodset::single_atom(&Alphabet::new(2).unwrap()),
        0.2,
        0.08,
    )
    .unwrap();
    let mut sum = vec![0.0; 9];
    for i in 0..5 {
        let tree = build_anabolic_tree(&params, rulenet_core::derive_seed(3, i), 8).unwrap();
        for (acc, v) in sum.iter_mut().zip(tree.level_sizes()) {
            *acc += v as f64;
        }
    }
    for (g, s) in got.iter().zip(&sum) {
        assert!((g - s / 5.0).abs() < 1e-12, "{g} vs {}", s / 5.0);
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# small run\nA = 2\np = 0.1\nnmax = 6\nsamples = 4\nseed = 11\n",
    )
    .unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&[
        "tree",
        "ana",
        "--config",
        s(&cfg),
        "--nmax",
        "5",
        "--out",
        s(&a),
    ]);
    ok(&[
        "tree",
        "ana",
        "--A",
        "2",
        "--p",
        "0.1",
        "--nmax",
        "5",
        "--samples",
        "4",
        "--seed",
        "11",
        "--out",
        s(&b),
    ]);
    assert_eq!(
        fs::read(a.join("levels.csv")).unwrap(),
        fs::read(b.join("levels.csv")).unwrap()
    );
    let t = read_csv(&a.join("levels.csv"), &output::LEVELS).unwrap();
    assert_eq!(t.rows.len(), 6);

    fs::write(&cfg, "A = 2\nbogus = 1\n").unwrap();
    assert_eq!(
        code(&["tree", "ana", "--config", s(&cfg), "--out", s(&a)]),
        2
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = s(dir.path());
    assert_eq!(code(&["tree", "ana", "--samples", "0", "--out", out]), 2);
    assert_eq!(code(&["scan", "--z-grid", "0.5:0.4:0.1", "--out", out]), 2);
    assert_eq!(code(&["--threads", "0", "tree", "ana", "--out", out]), 2);
    assert_eq!(
        code(&[
            "tree",
            "ana",
            "--A",
            "2",
            "--p",
            "1e-9",
            "--nmax",
            "12",
            "--samples",
            "2",
            "--budget",
            "50",
            "--out",
            out
        ]),
        3
    );
    assert_eq!(
        code(&[
            "tree",
            "ana",
            "--A",
            "3",
            "--nmax",
            "500",
            "--samples",
            "1",
            "--out",
            out
        ]),
        4
    );
    assert_eq!(
        code(&["network", "ana", "--A", "3", "--p", "1e-9", "--nmax", "30", "--out", out]),
        4
    );

    // A heights table passed where levels are expected.
    ok(&[
        "tree",
        "ana",
        "--A",
        "2",
        "--nmax",
        "6",
        "--samples",
        "3",
        "--out",
        out,
    ]);
    ok(&[
        "theory",
        "--A",
        "2",
        "--nmax",
        "6",
        "--z-grid",
        "0.5:0.5:0.1",
        "--out",
        out,
    ]);
    let heights = dir.path().join("heights.csv");
    let preds = dir.path().join("predictions.csv");
    assert_eq!(
        code(&[
            "compare",
            "--stats",
            s(&heights),
            "--predictions",
            s(&preds),
            "--out",
            out
        ]),
        5
    );
}

#[test]
fn compare_against_own_means_gives_unit_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&[
        "tree",
        "ana",
        "--A",
        "2",
        "--p",
        "0.1",
        "--nmax",
        "8",
        "--samples",
        "10",
        "--out",
        s(d),
    ]);
    // Rewrite the levels as a predictions table with every column equal to the empirical mean.
    let levels = read_csv(&d.join("levels.csv"), &output::LEVELS).unwrap();
    let means = levels.f64s("mean_V").unwrap();
    let rows = means.iter().enumerate().map(|(n, &m)| {
        vec![
            output::Cell::from(n as u64),
            m.into(),
            m.into(),
            Some(m).into(),
            m.into(),
        ]
    });
    output::write_csv(&d.join("self.csv"), &output::PREDICTIONS, rows).unwrap();
    ok(&[
        "compare",
        "--stats",
        s(&d.join("levels.csv")),
        "--predictions",
        s(&d.join("self.csv")),
        "--out",
        s(d),
    ]);
    let ratios = read_csv(&d.join("ratios.csv"), &output::RATIOS).unwrap();
    for col in ["ratio_plain", "ratio_k0", "ratio_k1"] {
        for (r, m) in ratios.opt_f64s(col).unwrap().iter().zip(&means) {
            if *m > 0.0 {
                assert!((r.unwrap() - 1.0).abs() < 1e-12, "{col}: {r:?}");
            }
        }
    }
    let json = read_json(&d.join("comparison.json")).unwrap();
    assert_eq!(json["k0"]["level_offset"], 0);
}

#[test]
fn theory_roots_and_phase_table() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "theory",
        "--A",
        "3",
        "--p",
        "0.5",
        "--z-grid",
        "0.05:0.95:0.05",
        "--out",
        s(dir.path()),
    ]);
    let roots = read_json(&dir.path().join("roots.json")).unwrap();
    let z_phi = roots["z_phi"].as_f64().unwrap();
    let z_star = roots["z_star"].as_f64().unwrap();
    assert!((z_phi - 0.676).abs() < 0.002, "{z_phi}");
    assert!((z_star - 0.746).abs() < 0.002, "{z_star}");
    let phases = read_csv(&dir.path().join("phases.csv"), &output::PHASES).unwrap();
    assert_eq!(phases.rows.len(), 19);
    let zs = phases.f64s("z").unwrap();
    let psi = phases.f64s("psi").unwrap();
    // psi is decreasing in z and crosses zero at z*.
    for (z, w) in zs.iter().zip(&psi) {
        assert_eq!(*w > 0.0, *z < z_star, "z = {z}, psi = {w}");
    }
}

#[test]
fn gw_extinction_table_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "gw",
        "ana",
        "--p",
        "0.08",
        "--samples",
        "4000",
        "--nmax",
        "40",
        "--out",
        s(dir.path()),
    ]);
    let t = read_csv(&dir.path().join("extinction.csv"), &output::EXTINCTION).unwrap();
    let u = t.f64s("u0n").unwrap();
    let mc = t.f64s("monte_carlo").unwrap();
    let se = t.f64s("stderr").unwrap();
    assert_eq!(u.len(), 40);
    assert!(u.windows(2).all(|w| w[0] <= w[1] + 1e-15));
    let last = u.len() - 1;
    assert!((mc[last] - u[last]).abs() <= 4.0 * se[last].max(1e-3));
    let lower = t.opt_f64s("lower").unwrap();
    let upper = t.opt_f64s("upper").unwrap();
    for i in 0..u.len() {
        if let Some(lo) = lower[i] {
            assert!(lo <= u[i] + 1e-9, "level {}", i + 1);
        }
        if let Some(hi) = upper[i] {
            assert!(u[i] <= hi + 1e-9, "level {}", i + 1);
        }
    }
    let logs = read_csv(&dir.path().join("logsize.csv"), &output::LOGSIZE).unwrap();
    // Jensen for the surviving population: E[log Z | Z > 0] <= log(E Z / P(Z > 0)).
    let surv = logs.f64s("survival").unwrap();
    for ((m, l), s) in logs
        .f64s("mean_logZ")
        .unwrap()
        .iter()
        .zip(logs.f64s("log_meanZ").unwrap())
        .zip(surv)
    {
        assert!(*m <= l - s.ln() + 1e-12, "{m} vs {l} at survival {s}");
    }
}

#[test]
fn network_counts_match_library() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "network",
        "ana",
        "--A",
        "2",
        "--p",
        "0.3",
        "--z",
        "0.5",
        "--foods",
        "atoms",
        "--nmax",
        "5",
        "--seed",
        "3",
        "--out",
        s(dir.path()),
    ]);
    let params = ModelParams::model_ii(
        Alphabet::new(2).unwrap(),
        Foodset::atoms(&Alphabet::new(2).unwrap()),
        0.3,
        0.08,
        0.5,
    )
    .unwrap();
    let net = build_anabolic_network(&params, 3, 5).unwrap();
    let t = read_csv(&dir.path().join("components.csv"), &output::COMPONENTS).unwrap();
    let iso: Vec<u64> = t
        .f64s("isolated")
        .unwrap()
        .iter()
        .map(|&x| x as u64)
        .collect();
    let two: Vec<u64> = t
        .f64s("two_molecule")
        .unwrap()
        .iter()
        .map(|&x| x as u64)
        .collect();
    assert_eq!(iso, net.isolated_counts());
    assert_eq!(two, net.two_molecule_counts());
    let summary = read_json(&dir.path().join("network_summary.json")).unwrap();
    assert_eq!(
        summary["vertices"].as_u64().unwrap(),
        net.vertex_count() as u64
    );
    assert_eq!(summary["no_two_embedded_paths"], true);
}

#[test]
fn scan_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "scan",
        "--A",
        "2",
        "--p",
        "0.5",
        "--z-grid",
        "0.5:0.9:0.2",
        "--nmax",
        "8",
        "--samples",
        "8",
        "--budget",
        "2000",
        "--out",
        s(dir.path()),
    ]);
    let t = read_csv(&dir.path().join("scan.csv"), &output::SCAN).unwrap();
    assert_eq!(t.f64s("z").unwrap(), vec![0.5, 0.7, 0.9]);
    let runs = t.u32s("runs").unwrap();
    assert!(runs.iter().all(|&r| r == 8));
    let json = read_json(&dir.path().join("scan.json")).unwrap();
    assert_eq!(json["n_max"], 8);
    assert!(json.get("bracket").is_some());
}
