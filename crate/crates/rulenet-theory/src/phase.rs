use rulenet_core::{Alphabet, Foodset, Kind, ModelParams};
use rulenet_gw::{GwSchedule, GwVariant};
use serde::{Deserialize, Serialize};

use crate::levels::{characteristic_levels, CharacteristicLevels};
use crate::TheoryError;

/// Phase functions of Model II.
///
/// Anabolic: `ψ(z) = ln|A| − |F| p′(z) z/(1−z)` with
/// `p′(z) = (p/|F|) Σ_F z^{|F|+1}`, `|F|` inside the sum being the food level.
/// Catabolic: `ψ(z) = ln|A| − q (z/(1−z))²`. In both cases `φ = ln z + ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunctions {
    kind: Kind,
    alphabet: Alphabet,
    foodset: Foodset,
    p: f64,
    q: f64,
}

impl PhaseFunctions {
    /// Anabolic functions with `p′ = pz`, parametrized by the product `|F|p`.
    /// Represented as a single level-0 food with rate `|F|p`.
    pub fn anabolic_lemma(alphabet_size: u32, fp: f64) -> Result<Self, TheoryError> {
        let alphabet = Alphabet::new(alphabet_size)?;
        if !(fp > 0.0 && fp.is_finite()) {
            return Err(TheoryError::Domain(fp));
        }
        Ok(Self {
            kind: Kind::Anabolic,
            foodset: Foodset::single_atom(&alphabet),
            alphabet,
            p: fp,
            q: fp,
        })
    }

    pub fn catabolic(alphabet_size: u32, q: f64) -> Result<Self, TheoryError> {
        let alphabet = Alphabet::new(alphabet_size)?;
        if !(q > 0.0 && q.is_finite()) {
            return Err(TheoryError::Domain(q));
        }
        Ok(Self {
            kind: Kind::Catabolic,
            foodset: Foodset::single_atom(&alphabet),
            alphabet,
            p: q,
            q,
        })
    }

    /// Uses the alphabet, foodset and rates of `params`; `params.z` is ignored.
    pub fn from_params(kind: Kind, params: &ModelParams) -> Self {
        Self {
            kind,
            alphabet: params.alphabet,
            foodset: params.foodset.clone(),
            p: params.p,
            q: params.q,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet.size()
    }

    pub fn food_count(&self) -> usize {
        self.foodset.len()
    }

    /// `|F|p` (anabolic) or `q` (catabolic).
    pub fn strength(&self) -> f64 {
        match self.kind {
            Kind::Anabolic => self.p * self.foodset.len() as f64,
            Kind::Catabolic => self.q,
        }
    }

    fn check(z: f64) -> Result<(), TheoryError> {
        if z > 0.0 && z < 1.0 {
            Ok(())
        } else {
            Err(TheoryError::Domain(z))
        }
    }

    /// `p′(z)`; for catabolic functions the analogous `qz`.
    pub fn p_prime(&self, z: f64) -> f64 {
        match self.kind {
            Kind::Anabolic => {
                let f = self.foodset.len() as f64;
                self.p / f
                    * self
                        .foodset
                        .levels()
                        .iter()
                        .map(|&l| z.powi(l as i32 + 1))
                        .sum::<f64>()
            }
            Kind::Catabolic => self.q * z,
        }
    }

    /// `ln|A| − ψ(z)`.
    fn correction(&self, z: f64) -> f64 {
        match self.kind {
            Kind::Anabolic => self.foodset.len() as f64 * self.p_prime(z) * z / (1.0 - z),
            Kind::Catabolic => self.q * (z / (1.0 - z)).powi(2),
        }
    }

    fn correction_prime(&self, z: f64) -> f64 {
        match self.kind {
            Kind::Anabolic => {
                let w = 1.0 - z;
                self.p
                    * self
                        .foodset
                        .levels()
                        .iter()
                        .map(|&l| {
                            let e = l as i32 + 2;
                            (e as f64 * z.powi(e - 1) * w + z.powi(e)) / (w * w)
                        })
                        .sum::<f64>()
            }
            Kind::Catabolic => 2.0 * self.q * z / (1.0 - z).powi(3),
        }
    }

    pub fn psi(&self, z: f64) -> Result<f64, TheoryError> {
        Self::check(z)?;
        Ok((self.alphabet_size() as f64).ln() - self.correction(z))
    }

    pub fn phi(&self, z: f64) -> Result<f64, TheoryError> {
        Ok(z.ln() + self.psi(z)?)
    }

    pub fn phi_prime(&self, z: f64) -> Result<f64, TheoryError> {
        Self::check(z)?;
        Ok(1.0 / z - self.correction_prime(z))
    }

    /// Asymptotic fraction of level-`n` molecules that do not react is `c(z)^n`.
    pub fn c(&self, z: f64) -> Result<f64, TheoryError> {
        Self::check(z)?;
        Ok((-self.correction(z)).exp())
    }

    /// The cubic whose root in `(0,1)` is `z′_φ`. Anabolic (one level-0
    /// food): `|F|p z³ + (1 − 2|F|p) z² − 2z + 1`; catabolic:
    /// `z³ − (3 − 2q) z² + 3z − 1`.
    pub fn h_cubic(&self, z: f64) -> Result<f64, TheoryError> {
        match self.kind {
            Kind::Anabolic => {
                if self.foodset.levels().iter().any(|&l| l != 0) {
                    return Err(TheoryError::NotLemmaForm("the anabolic cubic"));
                }
                let fp = self.strength();
                Ok(((fp * z + 1.0 - 2.0 * fp) * z - 2.0) * z + 1.0)
            }
            Kind::Catabolic => Ok(((z - (3.0 - 2.0 * self.q)) * z + 3.0) * z - 1.0),
        }
    }

    /// Model parameters at fugacity `z`. Fails when the rates are not
    /// probabilities.
    pub fn params_at(&self, z: f64) -> Result<ModelParams, TheoryError> {
        Self::check(z)?;
        Ok(ModelParams::model_ii(
            self.alphabet,
            self.foodset.clone(),
            self.p,
            self.q,
            z,
        )?)
    }

    /// Galton-Watson schedule at fugacity `z` with the exponents of `ψ`.
    pub fn schedule_at(&self, z: f64) -> Result<GwSchedule, TheoryError> {
        let variant = GwVariant::new(self.kind, rulenet_core::Variant::ModelII);
        Ok(GwSchedule::new(variant, &self.params_at(z)?)?)
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_sign = f(lo) > 0.0;
    debug_assert_ne!(lo_sign, f(hi) > 0.0, "bracket without sign change");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

const Z_LO: f64 = 1e-12;
const Z_HI: f64 = 1.0 - 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRoots {
    /// Lower zero of `φ`.
    pub y_phi: Option<f64>,
    /// Maximiser of `φ`.
    pub z_prime_phi: f64,
    /// Upper zero of `φ`.
    pub z_phi: Option<f64>,
    /// Zero of `ψ`.
    pub z_star: f64,
    pub phi_max: f64,
}

/// Roots of the phase functions. `φ` is strictly concave, so it has two
/// zeros around its maximiser when `φ(z′_φ) > 0` and none otherwise.
pub fn phase_roots(pf: &PhaseFunctions) -> PhaseRoots {
    let dphi = |z: f64| pf.phi_prime(z).expect("inside (0,1)");
    let phi = |z: f64| pf.phi(z).expect("inside (0,1)");
    let psi = |z: f64| pf.psi(z).expect("inside (0,1)");
    let z_prime_phi = bisect(dphi, Z_LO, Z_HI);
    let phi_max = phi(z_prime_phi);
    let (y_phi, z_phi) = if phi_max > 0.0 {
        (
            Some(bisect(phi, Z_LO, z_prime_phi)),
            Some(bisect(phi, z_prime_phi, Z_HI)),
        )
    } else {
        (None, None)
    };
    PhaseRoots {
        y_phi,
        z_prime_phi,
        z_phi,
        z_star: bisect(psi, Z_LO, Z_HI),
        phi_max,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    /// `φ > 0`, `φ′ > 0`.
    ALocalized,
    /// `φ > 0`, `φ′ ≤ 0`.
    ADelocalized,
    /// `φ < 0 < ψ`.
    B,
    /// `ψ < 0`.
    C,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::ALocalized => "A_localized",
            Phase::ADelocalized => "A_delocalized",
            Phase::B => "B",
            Phase::C => "C",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseClass {
    pub phase: Phase,
    /// `z` sits on a phase boundary up to rounding.
    pub boundary: bool,
}

const BOUNDARY_EPS: f64 = 1e-12;

pub fn classify_phase(pf: &PhaseFunctions, z: f64) -> Result<PhaseClass, TheoryError> {
    let (phi, psi, dphi) = (pf.phi(z)?, pf.psi(z)?, pf.phi_prime(z)?);
    let phase = if phi > 0.0 {
        if dphi > 0.0 {
            Phase::ALocalized
        } else {
            Phase::ADelocalized
        }
    } else if psi > 0.0 {
        Phase::B
    } else {
        Phase::C
    };
    let boundary = phi.abs() < BOUNDARY_EPS
        || psi.abs() < BOUNDARY_EPS
        || (phi > 0.0 && dphi.abs() < BOUNDARY_EPS);
    Ok(PhaseClass { phase, boundary })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub z: f64,
    pub phase: Phase,
    pub boundary: bool,
    pub roots: PhaseRoots,
    pub levels: CharacteristicLevels,
}

pub fn phase_report(pf: &PhaseFunctions, z: f64) -> Result<PhaseReport, TheoryError> {
    let class = classify_phase(pf, z)?;
    Ok(PhaseReport {
        z,
        phase: class.phase,
        boundary: class.boundary,
        roots: phase_roots(pf),
        levels: characteristic_levels(pf, z)?,
    })
}
