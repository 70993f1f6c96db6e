use rulenet_core::ModelParams;
use serde::{Deserialize, Serialize};

/// `Σ_k Σ_F 2(n−k) ln(1 − p′_F z^k)` over `k = 1..n`, `p′_F = p z^{|F|+1}`.
fn ln_silent_factors(params: &ModelParams, n: u32) -> f64 {
    let z = params.z;
    let mut out = 0.0;
    for level in params.foodset.levels() {
        let p_prime = params.p * z.powi(level as i32 + 1);
        for k in 1..n {
            out += 2.0 * (n - k) as f64 * (-p_prime * z.powi(k as i32)).ln_1p();
        }
    }
    out
}

/// Approximate probability that a fixed word of level `n` forms an isolated
/// component.
pub fn isolated_prob(params: &ModelParams, n: u32) -> f64 {
    ln_silent_factors(params, n).exp()
}

/// Approximate probability that a word of level `n−1` and its one-atom
/// extension form a component joined by a single primitive reaction.
pub fn two_molecule_prob(params: &ModelParams, n: u32) -> f64 {
    let fire = params.p * params.z.powi(n as i32);
    fire / (1.0 - fire) * isolated_prob(params, n)
}

/// Predicted growth rates of the isolated and two-molecule counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSlopes {
    /// `ψ_ana(z | |A|, 2|F|, p′)`.
    pub isolated: f64,
    /// `φ_ana(z | |A|, 2|F|, p′) = ln z + ψ_ana(z | |A|, 2|F|, p′)`.
    pub two_molecule: f64,
}

/// Both slopes at the fugacity of `params`; `−∞` at `z = 1`.
pub fn predicted_slopes(params: &ModelParams) -> NetworkSlopes {
    let z = params.z;
    let strength: f64 = params
        .foodset
        .levels()
        .iter()
        .map(|&l| params.p * z.powi(l as i32 + 1))
        .sum();
    let isolated = (params.alphabet_size() as f64).ln() - 2.0 * strength * z / (1.0 - z);
    NetworkSlopes {
        isolated,
        two_molecule: z.ln() + isolated,
    }
}
