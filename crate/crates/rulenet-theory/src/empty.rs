use rulenet_core::{Kind, ModelParams};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmptyNetwork {
    pub probability: f64,
    pub log_probability: f64,
    /// The log-series diverges (`|A| z ≥ 1`); the probability is zero.
    pub diverges: bool,
}

const TOL: f64 = 1e-12;
const MAX_TERMS: u32 = 1_000_000;

/// Probability that no reaction of `kind` is in the network, from the
/// per-reaction acceptance probabilities of the model.
///
/// Anabolic: `∏_F ∏_{n≥0} (1 − p z^{|F|+n})^{|A|^{n+1}}`; catabolic:
/// `∏_{n≥1} (1 − q z^n)^{n |A|^{n+1}}`.
pub fn empty_network_prob(kind: Kind, params: &ModelParams) -> EmptyNetwork {
    let a = params.alphabet_size() as f64;
    let z = params.z;
    if a * z >= 1.0 {
        return EmptyNetwork {
            probability: 0.0,
            log_probability: f64::NEG_INFINITY,
            diverges: true,
        };
    }
    // Summand for level n: (number of reactions) · ln(1 − rate).
    let term = |n: u32| -> f64 {
        let ln_words = (n as f64 + 1.0) * a.ln();
        match kind {
            Kind::Anabolic => params
                .foodset
                .levels()
                .iter()
                .map(|&l| -(ln_words + (-(-params.p * z.powi((l + n) as i32)).ln_1p()).ln()).exp())
                .sum(),
            Kind::Catabolic if n == 0 => 0.0,
            Kind::Catabolic => {
                -(ln_words + (n as f64).ln() + (-(-params.q * z.powi(n as i32)).ln_1p()).ln()).exp()
            }
        }
    };
    let ratio = a * z;
    let mut log_p = 0.0;
    for n in 0..MAX_TERMS {
        let t = term(n);
        log_p += t;
        // Terms decay at least like (|A|z)^n once n·ratio-growth settles.
        let r = ratio * (n as f64 + 2.0) / (n as f64 + 1.0);
        if n > 2 && r < 1.0 && t.abs() * r / (1.0 - r) < TOL {
            break;
        }
        if t == 0.0 && n > 2 {
            break;
        }
    }
    EmptyNetwork {
        probability: log_p.exp(),
        log_probability: log_p,
        diverges: false,
    }
}
