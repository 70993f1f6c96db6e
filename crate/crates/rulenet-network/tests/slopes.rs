//! Ensemble growth rates of component counts against the predicted slopes.

use rulenet_core::{derive_seed, Alphabet, Foodset, HashOracle, ModelParams};
use rulenet_network::{
    build_anabolic_network, isolated_catabolic_counts, isolated_catabolic_slope, predicted_slopes,
    DEFAULT_TAIL_LEN,
};

/// Least-squares slope of `ln y` against `n` over `range`.
fn log_slope(means: &[f64], range: std::ops::RangeInclusive<usize>) -> f64 {
    let pts: Vec<(f64, f64)> = range.map(|n| (n as f64, means[n].ln())).collect();
    let k = pts.len() as f64;
    let (mx, my) = (
        pts.iter().map(|p| p.0).sum::<f64>() / k,
        pts.iter().map(|p| p.1).sum::<f64>() / k,
    );
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn isolated_anabolic_slope() {
    let a = Alphabet::new(3).unwrap();
    let prm = ModelParams::model_ii(a, Foodset::atoms(&a), 0.02, 0.1, 0.5).unwrap();
    let (runs, n_max) = (20u64, 10u32);
    let mut mean = vec![0.0; n_max as usize + 1];
    for seed in 0..runs {
        let net = build_anabolic_network(&prm, derive_seed(21, seed), n_max).unwrap();
        for (m, &c) in mean.iter_mut().zip(net.isolated_counts()) {
            *m += c as f64 / runs as f64;
        }
    }
    let slope = log_slope(&mean, 4..=10);
    let want = predicted_slopes(&prm).isolated;
    assert!((slope / want - 1.0).abs() < 0.10, "{slope} vs {want}");
}

#[test]
fn isolated_catabolic_slope_matches_psi() {
    let a = Alphabet::new(3).unwrap();
    let prm = ModelParams::model_ii(a, Foodset::single_atom(&a), 0.1, 0.1, 0.2).unwrap();
    let (runs, n_max) = (3u64, 10u32);
    let mut mean = vec![0.0; n_max as usize + 1];
    for seed in 0..runs {
        let oracle = HashOracle::new(&prm, derive_seed(5, seed));
        let counts = isolated_catabolic_counts(&prm, &oracle, n_max, DEFAULT_TAIL_LEN).unwrap();
        for (m, c) in mean.iter_mut().zip(counts) {
            *m += c as f64 / runs as f64;
        }
    }
    let slope = log_slope(&mean, 3..=10);
    let want = isolated_catabolic_slope(&prm).unwrap();
    assert!((slope / want - 1.0).abs() < 0.15, "{slope} vs {want}");
}
