use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::GwSchedule;

/// One realization of the comparison process.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GwTrajectory {
    /// `Z_0, …, Z_{n_max}` with `Z_0 = 1`.
    pub sizes: Vec<u64>,
    /// Primitive (blue) children per level; entry 0 is always 0.
    pub primitives: Vec<u64>,
}

impl GwTrajectory {
    pub fn extinct_by(&self, n: usize) -> bool {
        self.sizes.get(n).map_or(true, |&z| z == 0)
    }
}

fn binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("p checked").sample(rng)
}

/// Samples `Z_n` as `Z_{n−1}` independent `Bin(|A|, p_n)` draws. Each of the
/// remaining child slots is primitive with probability `b_n/(1 − p_n)`.
pub fn simulate_gw(schedule: &GwSchedule, seed: u64, n_max: u32) -> GwTrajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = schedule.alphabet_size() as u64;
    let mut sizes = vec![0u64; n_max as usize + 1];
    let mut primitives = vec![0u64; n_max as usize + 1];
    sizes[0] = 1;
    for n in 1..=n_max {
        let prev = sizes[n as usize - 1];
        if prev == 0 {
            break;
        }
        let slots = prev.saturating_mul(a);
        let p = schedule.progeny_prob(n);
        let red = binomial(&mut rng, slots, p);
        let rest = slots - red;
        let blue_given_not_red = if p < 1.0 {
            (schedule.blue_prob(n) / (1.0 - p)).min(1.0)
        } else {
            0.0
        };
        sizes[n as usize] = red;
        primitives[n as usize] = binomial(&mut rng, rest, blue_given_not_red);
    }
    GwTrajectory { sizes, primitives }
}
