use rulenet_core::{ModelParams, ReactionOracle, Word};
use rulenet_theory::PhaseFunctions;
use serde::{Deserialize, Serialize};

use crate::anabolic::word_at;
use crate::{NetworkError, DEFAULT_MAX_VERTICES};

/// Longest activating group tried by [`isolated_catabolic_counts`].
pub const DEFAULT_TAIL_LEN: u32 = 3;

const TAIL_TOL: f64 = 1e-12;
const MAX_TERMS: usize = 100_000;
const CHAIN_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CataPhase {
    /// `z < 1/|A|`.
    Finite,
    /// `z ≥ 1/|A|`: every fixed word is a fragmentation product.
    Fragmentation,
}

impl CataPhase {
    pub fn of(params: &ModelParams) -> Self {
        if params.alphabet_size() as f64 * params.z < 1.0 {
            CataPhase::Finite
        } else {
            CataPhase::Fragmentation
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FragProduct {
    pub probability: f64,
    pub log_probability: f64,
    pub phase: CataPhase,
}

/// Probability that `x` is not a fragmentation product,
/// `(∏_{ℓ=1}^m ∏_{n≥0} (1 − q z^{n+ℓ+2})^{|A|^{n+1}})²` with `m` the level of `x`.
pub fn frag_product_prob(params: &ModelParams, x: &Word) -> FragProduct {
    let phase = CataPhase::of(params);
    if phase == CataPhase::Fragmentation {
        return FragProduct {
            probability: 0.0,
            log_probability: f64::NEG_INFINITY,
            phase,
        };
    }
    let a = params.alphabet_size() as f64;
    let (q, z) = (params.q, params.z);
    let r = a * z;
    let mut ln = 0.0;
    for l in 1..=x.level() {
        let mut weight = a;
        let mut zp = z.powi(l as i32 + 2);
        for _ in 0..MAX_TERMS {
            let term = weight * (-q * zp).ln_1p();
            ln += term;
            // |ln(1 − x)| ≤ x/(1 − x) bounds the remaining terms geometrically.
            if term.abs() * r / (1.0 - r) <= TAIL_TOL * ln.abs().max(f64::MIN_POSITIVE) {
                break;
            }
            weight *= a;
            zp *= z;
        }
    }
    let ln = 2.0 * ln;
    FragProduct {
        probability: ln.exp(),
        log_probability: ln,
        phase,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatabolicNetworkReport {
    pub phase: CataPhase,
    /// `ln(1/(2q|A|)) / ln(|A|z)`.
    pub n_frag: f64,
    /// `g(n)` for `n = 0, 1, …` until it falls 50 below its maximum.
    pub g: Vec<f64>,
    pub g_argmax: u32,
    /// `m_1 = m`, `m_{j+1} = ln(1/q)/ln(|A|z) + (1 + ε/ln(|A|z)) m_j`.
    pub shift_chain: Vec<f64>,
    /// `ln(1/q)/ε`, `None` at `z = 1`.
    pub n_max_cutoff: Option<f64>,
    /// `ln(|A|z)/ε`, `None` at `z = 1`.
    pub j_dis: Option<f64>,
}

/// Level shifts of fragmentation chains starting from a word of level `m`.
pub fn level_shift_analysis(
    params: &ModelParams,
    m: u32,
) -> Result<CatabolicNetworkReport, NetworkError> {
    let a = params.alphabet_size() as f64;
    let (q, z) = (params.q, params.z);
    if a * z <= 1.0 {
        return Err(NetworkError::Phase {
            z,
            threshold: 1.0 / a,
        });
    }
    let ln_az = (a * z).ln();
    let eps = 1.0 - z;
    let n_frag = (1.0 / (2.0 * q * a)).ln() / ln_az;

    let mut g = Vec::new();
    let mut sum = 0.0;
    let mut best = (0u32, f64::NEG_INFINITY);
    for n in 0..MAX_TERMS as u32 {
        let value = (n as f64 + 1.0) * a.ln() + q.ln() + (n + m + 2) as f64 * z.ln() + sum;
        if value > best.1 {
            best = (n, value);
        }
        if value < best.1 - 50.0 || !value.is_finite() {
            break;
        }
        g.push(value);
        sum += a.powi(n as i32 + 1) * (-q * z.powi((n + m + 2) as i32)).ln_1p();
    }

    let n_max_cutoff = (eps > 0.0).then(|| (1.0 / q).ln() / eps);
    let j_dis = (eps > 0.0).then(|| ln_az / eps);
    let mut shift_chain = vec![m as f64];
    while shift_chain.len() < CHAIN_CAP {
        let last = *shift_chain.last().expect("non-empty");
        if n_max_cutoff.is_some_and(|c| last > c) {
            break;
        }
        shift_chain.push((1.0 / q).ln() / ln_az + (1.0 + eps / ln_az) * last);
    }
    Ok(CatabolicNetworkReport {
        phase: CataPhase::Fragmentation,
        n_frag,
        g,
        g_argmax: best.0,
        shift_chain,
        n_max_cutoff,
        j_dis,
    })
}

/// Predicted growth rate `ψ_cata(z)` of the number of isolated words.
pub fn isolated_catabolic_slope(params: &ModelParams) -> Result<f64, NetworkError> {
    if CataPhase::of(params) == CataPhase::Fragmentation {
        return Err(NetworkError::Phase {
            z: params.z,
            threshold: 1.0 / params.alphabet_size() as f64,
        });
    }
    Ok(PhaseFunctions::catabolic(params.alphabet_size(), params.q)?.psi(params.z)?)
}

/// Number of words per level `0..=n_max` that are isolated in the catabolic
/// network: not decomposable, and not the left or right product of a cut
/// whose activating group has at most `tail_len` atoms.
pub fn isolated_catabolic_counts(
    params: &ModelParams,
    oracle: &impl ReactionOracle,
    n_max: u32,
    tail_len: u32,
) -> Result<Vec<u64>, NetworkError> {
    let alphabet = params.alphabet;
    let a = alphabet.size() as usize;
    let longest = (n_max + 1 + tail_len) as usize;
    if longest > alphabet.capacity() {
        return Err(NetworkError::Capacity {
            vertices: u64::MAX,
            limit: DEFAULT_MAX_VERTICES,
        });
    }
    let level_sizes: Vec<usize> = (0..=n_max).map(|n| a.pow(n + 1)).collect();
    let total: usize = level_sizes.iter().sum();
    if total as u64 > DEFAULT_MAX_VERTICES {
        return Err(NetworkError::Capacity {
            vertices: total as u64,
            limit: DEFAULT_MAX_VERTICES,
        });
    }
    let tails: Vec<Word> = (0..tail_len)
        .flat_map(|t| alphabet.words_of_level(t))
        .collect();

    const DECOMPOSABLE: u8 = 1;
    const RIGHT_PRODUCT: u8 = 2;
    const LEFT_PRODUCT: u8 = 4;
    let mut prev: Vec<u8> = Vec::new();
    let mut counts = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max as usize {
        let mut cur = vec![0u8; level_sizes[n]];
        let mut isolated = 0u64;
        for (i, slot) in cur.iter_mut().enumerate() {
            let x = word_at(&alphabet, n, i);
            let mut b = 0;
            if n > 0 {
                let (suffix, prefix) = (prev[i % level_sizes[n - 1]], prev[i / a]);
                b |= (suffix | prefix) & DECOMPOSABLE;
                b |= suffix & RIGHT_PRODUCT;
                b |= prefix & LEFT_PRODUCT;
                if (1..=n as u32).any(|j| oracle.catabolic(x, j)) {
                    b |= DECOMPOSABLE;
                }
            }
            let cut = x.len() as u32;
            if b & RIGHT_PRODUCT == 0
                && tails
                    .iter()
                    .any(|t| oracle.catabolic(x.concat(t).expect("capacity checked"), cut))
            {
                b |= RIGHT_PRODUCT;
            }
            if b & LEFT_PRODUCT == 0
                && tails.iter().any(|t| {
                    oracle.catabolic(t.concat(&x).expect("capacity checked"), t.len() as u32)
                })
            {
                b |= LEFT_PRODUCT;
            }
            if b == 0 {
                isolated += 1;
            }
            *slot = b;
        }
        counts.push(isolated);
        prev = cur;
    }
    Ok(counts)
}
