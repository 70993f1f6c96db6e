use rulenet_core::{Kind, ModelParams, Variant};
use serde::{Deserialize, Serialize};

use crate::GwError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GwVariant {
    AnaI,
    AnaII,
    CataI,
    CataII,
}

impl GwVariant {
    pub fn new(kind: Kind, variant: Variant) -> Self {
        match (kind, variant) {
            (Kind::Anabolic, Variant::ModelI) => GwVariant::AnaI,
            (Kind::Anabolic, Variant::ModelII) => GwVariant::AnaII,
            (Kind::Catabolic, Variant::ModelI) => GwVariant::CataI,
            (Kind::Catabolic, Variant::ModelII) => GwVariant::CataII,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            GwVariant::AnaI | GwVariant::AnaII => Kind::Anabolic,
            GwVariant::CataI | GwVariant::CataII => Kind::Catabolic,
        }
    }
}

/// Exponent convention for Model II.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Convention {
    /// Level-`k` suffix fires with `p z^{|F|+1+k}` (resp. `q z^{k+1}`), the
    /// form used by the product formulas.
    #[default]
    Shifted,
    /// Level-`k` suffix fires with `p z^{|F|+k}` (resp. `q z^k`), matching
    /// the Bernoulli parameters of the simulator.
    Displayed,
}

impl Convention {
    fn shift(self) -> i32 {
        match self {
            Convention::Shifted => 1,
            Convention::Displayed => 0,
        }
    }
}

/// Levels tabulated at construction; larger levels are summed on demand.
const TABLE_LEVELS: usize = 4096;

/// Generation-indexed progeny parameters with their cumulative products.
#[derive(Clone, Debug, PartialEq)]
pub struct GwSchedule {
    variant: GwVariant,
    convention: Convention,
    size: u32,
    p: f64,
    q: f64,
    z: f64,
    food_levels: Vec<u32>,
    /// `ln σ_k`, k = 0..TABLE_LEVELS.
    ln_silent: Vec<f64>,
    /// `ln p_n`, n = 0..TABLE_LEVELS.
    ln_p: Vec<f64>,
    /// `ln m_{1,n}`, n = 0..TABLE_LEVELS.
    ln_m: Vec<f64>,
}

impl GwSchedule {
    pub fn new(variant: GwVariant, params: &ModelParams) -> Result<Self, GwError> {
        Self::with_convention(variant, params, Convention::Shifted)
    }

    /// Schedule matching the model variant and kind of `params`.
    pub fn for_params(kind: Kind, params: &ModelParams) -> Self {
        Self::new(GwVariant::new(kind, params.variant), params).expect("variant taken from params")
    }

    pub fn with_convention(
        variant: GwVariant,
        params: &ModelParams,
        convention: Convention,
    ) -> Result<Self, GwError> {
        if matches!(variant, GwVariant::AnaI | GwVariant::CataI) && params.z != 1.0 {
            return Err(GwError::Variant {
                variant,
                z: params.z,
            });
        }
        let mut s = Self {
            variant,
            convention,
            size: params.alphabet.size(),
            p: params.p,
            q: params.q,
            z: params.z,
            food_levels: params.foodset.levels(),
            ln_silent: Vec::new(),
            ln_p: Vec::new(),
            ln_m: Vec::new(),
        };
        s.ln_silent = (0..TABLE_LEVELS as u32)
            .map(|k| s.ln_silent_direct(k))
            .collect();
        let ln_a = (s.size as f64).ln();
        let (mut lp, mut lm) = (0.0, 0.0);
        s.ln_p.push(0.0);
        s.ln_m.push(0.0);
        for k in 1..TABLE_LEVELS {
            lp += s.ln_silent[k];
            lm += ln_a + lp;
            s.ln_p.push(lp);
            s.ln_m.push(lm);
        }
        Ok(s)
    }

    pub fn variant(&self) -> GwVariant {
        self.variant
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn alphabet_size(&self) -> u32 {
        self.size
    }

    fn ln_silent_direct(&self, k: u32) -> f64 {
        let shift = self.convention.shift();
        match self.variant {
            GwVariant::AnaI => self.food_levels.len() as f64 * (-self.p).ln_1p(),
            GwVariant::AnaII => self
                .food_levels
                .iter()
                .map(|&f| (-self.p * self.z.powi(f as i32 + shift + k as i32)).ln_1p())
                .sum(),
            GwVariant::CataI => k as f64 * (-self.q).ln_1p(),
            GwVariant::CataII => k as f64 * (-self.q * self.z.powi(k as i32 + shift)).ln_1p(),
        }
    }

    /// `ln σ_k`.
    pub fn ln_silent(&self, k: u32) -> f64 {
        self.ln_silent
            .get(k as usize)
            .copied()
            .unwrap_or_else(|| self.ln_silent_direct(k))
    }

    /// Probability that the level-`k` suffix of a child does not fire.
    pub fn silent(&self, k: u32) -> f64 {
        self.ln_silent(k).exp()
    }

    /// Probability that a level-`k` suffix fires, computed without
    /// cancellation.
    pub fn fire(&self, k: u32) -> f64 {
        -self.ln_silent(k).exp_m1()
    }

    pub fn ln_progeny_prob(&self, n: u32) -> f64 {
        match self.ln_p.get(n as usize) {
            Some(&v) => v,
            None => {
                self.ln_p[TABLE_LEVELS - 1]
                    + (TABLE_LEVELS as u32..=n)
                        .map(|k| self.ln_silent(k))
                        .sum::<f64>()
            }
        }
    }

    /// `p_n`, the probability that a child of a level-`(n−1)` vertex survives.
    pub fn progeny_prob(&self, n: u32) -> f64 {
        self.ln_progeny_prob(n).exp().clamp(0.0, 1.0)
    }

    /// `b_n = p_{n−1}(1 − σ_n)`, the probability that a child is primitive.
    pub fn blue_prob(&self, n: u32) -> f64 {
        if n == 0 {
            return 0.0;
        }
        (self.ln_progeny_prob(n - 1).exp() * self.fire(n)).clamp(0.0, 1.0)
    }

    pub fn ln_mean_level_size(&self, n: u32) -> f64 {
        match self.ln_m.get(n as usize) {
            Some(&v) => v,
            None => {
                let ln_a = (self.size as f64).ln();
                (TABLE_LEVELS as u32..=n).fold(self.ln_m[TABLE_LEVELS - 1], |acc, k| {
                    acc + ln_a + self.ln_progeny_prob(k)
                })
            }
        }
    }

    /// `m_{1,n} = ∏_{k=1}^n |A| p_k`.
    pub fn mean_level_size(&self, n: u32) -> f64 {
        self.ln_mean_level_size(n).exp()
    }

    /// Model I only: `m_{1,n}` extended to real `n`,
    /// `|A|^n (1−p)^{|F| n(n+1)/2}` (resp. `(1−q)^{n(n+1)(n+2)/6}`).
    pub fn mean_level_size_continuous(&self, n: f64) -> Option<f64> {
        let ln_a = (self.size as f64).ln();
        match self.variant {
            GwVariant::AnaI => {
                let f = self.food_levels.len() as f64;
                Some((n * ln_a + f * n * (n + 1.0) / 2.0 * (-self.p).ln_1p()).exp())
            }
            GwVariant::CataI => {
                Some((n * ln_a + n * (n + 1.0) * (n + 2.0) / 6.0 * (-self.q).ln_1p()).exp())
            }
            _ => None,
        }
    }

    /// Model I anabolic: `ln|A| / (|F| ln(1/(1−p)))`, the real maximiser of
    /// the continuous mean.
    pub fn n0_continuous(&self) -> Option<f64> {
        match self.variant {
            GwVariant::AnaI => {
                Some((self.size as f64).ln() / (self.food_levels.len() as f64 * -(-self.p).ln_1p()))
            }
            _ => None,
        }
    }

    /// Largest `n` with `|A| p_n ≥ 1`, i.e. the argmax of `m_{1,n}`.
    pub fn n0(&self) -> u32 {
        let ln_a = (self.size as f64).ln();
        let mut n = 0;
        while n < 100_000 && ln_a + self.ln_progeny_prob(n + 1) >= 0.0 {
            n += 1;
        }
        n
    }

    /// Level-independent factor of the k=0 correction.
    pub fn k0_prefactor(&self) -> f64 {
        let a = self.size as f64;
        match self.variant.kind() {
            Kind::Anabolic => a * (a * self.ln_silent(0)).exp(),
            Kind::Catabolic => {
                let first = match self.variant {
                    GwVariant::CataI => self.q,
                    _ => self.q * self.z.powi(self.convention.shift()),
                };
                a * (a * (-first).ln_1p()).exp()
            }
        }
    }

    /// k=0 corrected mean level size.
    pub fn corrected_mean_k0(&self, n: u32) -> f64 {
        (self.k0_prefactor().ln() + self.ln_mean_level_size(n)).exp()
    }

    /// Predicted mean number of primitive vertices at level `n`:
    /// `|A| b_n m_{1,n−1}`, with the k=0 prefactor for anabolic trees. At
    /// `n = 0` the exact value `|A|(1 − σ_0)` is returned.
    pub fn primitive_mean(&self, n: u32) -> f64 {
        let a = self.size as f64;
        if n == 0 {
            return a * self.fire(0);
        }
        let pre = match self.variant.kind() {
            Kind::Anabolic => self.k0_prefactor().ln(),
            Kind::Catabolic => 0.0,
        };
        let blue = self.ln_progeny_prob(n - 1) + self.fire(n).ln();
        (pre + self.ln_mean_level_size(n - 1) + a.ln() + blue).exp()
    }

    /// Progeny generating function `f_n(s) = (1 − p_n(1 − s))^{|A|}`.
    pub fn generating_fn(&self, n: u32, s: f64) -> Result<f64, GwError> {
        if !(0.0..=1.0).contains(&s) {
            return Err(GwError::Domain(s));
        }
        Ok((self.size as f64 * (-self.progeny_prob(n) * (1.0 - s)).ln_1p()).exp())
    }
}
