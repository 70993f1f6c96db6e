//! Brute-force k=1 correction: exact law of the first two tree levels, then
//! a multitype mean recursion keyed by the last atom.

use rulenet_core::Kind;

use crate::{GwError, GwSchedule};

pub const K1_MAX_ALPHABET: u32 = 4;

/// `E[Z_n]` for `n = 0..=n_max` under the k=1 correction.
///
/// Level 0 is the random set `A′` of silent atoms and level 1 the random set
/// `V_1 ⊆ A′ × A′` of silent pairs. Given these, a red word ending in `a`
/// has mean `[ab ∈ V_1] ∏_{k=2}^ℓ σ_k` children `·b` at level `ℓ`.
/// Exact for `n ≤ 2`.
pub fn corrected_mean_k1_levels(schedule: &GwSchedule, n_max: u32) -> Result<Vec<f64>, GwError> {
    let size = schedule.alphabet_size();
    if size > K1_MAX_ALPHABET {
        return Err(GwError::EnumerationBound {
            size,
            max: K1_MAX_ALPHABET,
        });
    }
    let a = size as usize;
    // Catabolic atoms are never cut.
    let atom_silent = match schedule.variant().kind() {
        Kind::Anabolic => schedule.silent(0),
        Kind::Catabolic => 1.0,
    };
    let pair_silent = schedule.silent(1);
    // c_ℓ = ∏_{k=2}^ℓ σ_k.
    let mut scale = vec![1.0; n_max as usize + 1];
    for l in 2..=n_max as usize {
        scale[l] = scale[l - 1] * schedule.silent(l as u32);
    }

    let mut means = vec![0.0; n_max as usize + 1];
    for atoms in 0u32..(1 << a) {
        let k = atoms.count_ones() as i32;
        let p_atoms = atom_silent.powi(k) * (1.0 - atom_silent).powi(a as i32 - k);
        means[0] += p_atoms * k as f64;
        if k == 0 || n_max == 0 {
            continue;
        }
        let members: Vec<usize> = (0..a).filter(|&i| atoms >> i & 1 == 1).collect();
        let pairs: Vec<(usize, usize)> = members
            .iter()
            .flat_map(|&x| members.iter().map(move |&y| (x, y)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let m = mask.count_ones() as i32;
            let weight =
                p_atoms * pair_silent.powi(m) * (1.0 - pair_silent).powi(pairs.len() as i32 - m);
            if weight == 0.0 {
                continue;
            }
            let mut adj = [[0.0f64; K1_MAX_ALPHABET as usize]; K1_MAX_ALPHABET as usize];
            let mut row = [0.0f64; K1_MAX_ALPHABET as usize];
            for (i, &(x, y)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    adj[x][y] = 1.0;
                    row[y] += 1.0;
                }
            }
            // row[b] = number of level-1 red words ending in b.
            means[1] += weight * m as f64;
            let mut v = row;
            for l in 2..=n_max as usize {
                let mut next = [0.0f64; K1_MAX_ALPHABET as usize];
                for x in 0..a {
                    if v[x] != 0.0 {
                        for y in 0..a {
                            next[y] += v[x] * adj[x][y];
                        }
                    }
                }
                for y in 0..a {
                    next[y] *= scale[l];
                }
                v = next;
                means[l] += weight * v.iter().sum::<f64>();
            }
        }
    }
    Ok(means)
}

pub fn corrected_mean_k1(schedule: &GwSchedule, n: u32) -> Result<f64, GwError> {
    if n < 2 {
        return Err(GwError::Level { n, min: 2 });
    }
    Ok(corrected_mean_k1_levels(schedule, n)?[n as usize])
}

/// Contribution of the maximal two-level tree alone:
/// `P[T_1 = t_max] |A|^{n+1} ∏_{k=2}^n σ_k^{n−k+1}`.
pub fn k1_tmax_term(schedule: &GwSchedule, n: u32) -> f64 {
    let a = schedule.alphabet_size() as f64;
    let atom = match schedule.variant().kind() {
        Kind::Anabolic => schedule.ln_silent(0),
        Kind::Catabolic => 0.0,
    };
    let mut ln = a * atom + a * a * schedule.ln_silent(1) + (n as f64 + 1.0) * a.ln();
    for k in 2..=n {
        ln += (n - k + 1) as f64 * schedule.ln_silent(k);
    }
    ln.exp()
}
