use rulenet_core::{Kind, ModelParams, Variant};
use rulenet_gw::GwSchedule;
use serde::{Deserialize, Serialize};

use crate::phase::{classify_phase, Phase, PhaseFunctions};
use crate::TheoryError;

/// Largest level scanned when looking for a sign change.
pub(crate) const SCAN_CAP: u32 = 100_000;

/// Levels from the exact finite products. `None` means undefined in the
/// phase of `z` or not reached within the scan cap.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicLevels {
    /// Argmax of the mean level size.
    pub n0: Option<u32>,
    /// First level where the per-level growth exponent `(1/n) ln m_{1,n}`
    /// turns negative.
    pub n0_prime: Option<u32>,
    /// Argmax of the mean primitive count.
    pub m0: Option<u32>,
    /// First level where `(1/m) ln(z^m m_{1,m})` turns negative.
    pub m0_prime: Option<u32>,
    pub asymptotic: AsymptoticLevels,
}

/// Small-`p′` approximations of the same levels (anabolic only).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticLevels {
    /// `ln|A| / (|F| p′)`.
    pub n0: Option<f64>,
    /// `2 n₀`.
    pub n0_prime: Option<f64>,
    /// `ln(|A| z) / (|F| p′ z)`.
    pub m0: Option<f64>,
}

struct Scan {
    n0: Option<u32>,
    n0_prime: Option<u32>,
    m0: Option<u32>,
    m0_prime: Option<u32>,
}

/// Walks the schedule once, accumulating `ln p_n` and `ln m_{1,n}`.
fn scan(s: &GwSchedule, z: f64) -> Scan {
    let ln_a = (s.alphabet_size() as f64).ln();
    let ln_z = z.ln();
    let mut out = Scan {
        n0: None,
        n0_prime: None,
        m0: None,
        m0_prime: None,
    };
    // ln p_{n−1}, ln m_{1,n−1} at the top of iteration n.
    let (mut ln_p, mut ln_m) = (0.0, 0.0);
    let mut best: Option<(u32, f64)> = None;
    let mut m0_done = false;
    for n in 1..=SCAN_CAP {
        // Primitive mean up to a constant: m_{1,n−1} p_{n−1} (1 − σ_n).
        let prim = ln_m + ln_p + s.fire(n).ln();
        if !m0_done {
            match best {
                Some((_, b)) if prim <= b => {
                    if prim < b - 50.0 {
                        out.m0 = best.map(|(k, _)| k);
                        m0_done = true;
                    }
                }
                _ => best = Some((n, prim)),
            }
        }
        ln_p += s.ln_silent(n);
        let step = ln_a + ln_p;
        if out.n0.is_none() && step < 0.0 {
            out.n0 = Some(n - 1);
        }
        ln_m += step;
        if out.n0_prime.is_none() && ln_m < 0.0 {
            out.n0_prime = Some(n);
        }
        if out.m0_prime.is_none() && ln_m + n as f64 * ln_z < 0.0 {
            out.m0_prime = Some(n);
        }
        if out.n0.is_some() && out.n0_prime.is_some() && out.m0_prime.is_some() && m0_done {
            break;
        }
    }
    out
}

/// Characteristic levels of Model II at fugacity `z`. `n₀, n′₀` are reported
/// in phase C and `m₀, m′₀` wherever `φ(z) < 0`.
pub fn characteristic_levels(
    pf: &PhaseFunctions,
    z: f64,
) -> Result<CharacteristicLevels, TheoryError> {
    let phase = classify_phase(pf, z)?.phase;
    let sched = pf.schedule_at(z)?;
    let s = scan(&sched, z);
    let in_c = phase == Phase::C;
    let phi_negative = matches!(phase, Phase::B | Phase::C);
    let asymptotic = match pf.kind() {
        Kind::Anabolic => {
            let fp = pf.food_count() as f64 * pf.p_prime(z);
            let ln_a = (pf.alphabet_size() as f64).ln();
            let n0 = in_c.then(|| ln_a / fp);
            AsymptoticLevels {
                n0,
                n0_prime: n0.map(|v| 2.0 * v),
                m0: phi_negative.then(|| (pf.alphabet_size() as f64 * z).ln() / (fp * z)),
            }
        }
        Kind::Catabolic => AsymptoticLevels::default(),
    };
    Ok(CharacteristicLevels {
        n0: if in_c { s.n0 } else { None },
        n0_prime: if in_c { s.n0_prime } else { None },
        m0: if phi_negative { s.m0 } else { None },
        m0_prime: if phi_negative { s.m0_prime } else { None },
        asymptotic,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelILevels {
    /// Argmax of the mean level size.
    pub n0: u32,
    /// First level with mean size below one (uncorrected).
    pub n0_prime: u32,
    /// Anabolic: `ln|A| / (|F| ln(1/(1−p)))`.
    pub n0_continuous: Option<f64>,
    /// Catabolic: `√(2 ln|A| / q)`.
    pub n_frag: Option<f64>,
    /// Catabolic: `√3 n_frag`, the predicted tree height.
    pub predicted_height: Option<f64>,
    /// Argmax of the mean primitive count.
    pub m0: Option<u32>,
}

pub fn model_i_levels(kind: Kind, params: &ModelParams) -> Result<ModelILevels, TheoryError> {
    if params.variant != Variant::ModelI {
        return Err(TheoryError::Domain(params.z));
    }
    let sched = GwSchedule::for_params(kind, params);
    let s = scan(&sched, 1.0);
    let ln_a = (params.alphabet_size() as f64).ln();
    let n_frag = (kind == Kind::Catabolic).then(|| (2.0 * ln_a / params.q).sqrt());
    Ok(ModelILevels {
        n0: sched.n0(),
        n0_prime: s.n0_prime.unwrap_or(SCAN_CAP),
        n0_continuous: sched.n0_continuous(),
        n_frag,
        predicted_height: n_frag.map(|v| 3f64.sqrt() * v),
        m0: s.m0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelMeans {
    pub n: u32,
    /// `⟨|V_n|⟩` with the k=0 correction.
    pub size: f64,
    /// Uncorrected `m_{1,n}`.
    pub size_plain: f64,
    /// `⟨|Prim_n|⟩`.
    pub primitives: f64,
}

/// Product-formula predictions for level `n` of the tree of `kind`.
pub fn predicted_level_means(kind: Kind, params: &ModelParams, n: u32) -> LevelMeans {
    let s = GwSchedule::for_params(kind, params);
    LevelMeans {
        n,
        size: s.corrected_mean_k0(n),
        size_plain: s.mean_level_size(n),
        primitives: s.primitive_mean(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rulenet_core::{Alphabet, Foodset};

    fn model_i(p: f64) -> ModelParams {
        let a = Alphabet::new(3).unwrap();
        ModelParams::model_i(a, Foodset::single_atom(&a), p, p).unwrap()
    }

    #[test]
    fn model_i_examples() {
        let ana = model_i_levels(Kind::Anabolic, &model_i(0.08)).unwrap();
        assert_eq!(ana.n0, 13);
        assert_relative_eq!(
            ana.n0_continuous.unwrap(),
            3f64.ln() / (1.0f64 / 0.92).ln(),
            max_relative = 1e-12
        );
        assert!((13.0..13.3).contains(&ana.n0_continuous.unwrap()));
        let cata = model_i_levels(Kind::Catabolic, &model_i(0.08)).unwrap();
        assert_eq!(cata.n0, 4);
        assert_relative_eq!(
            cata.predicted_height.unwrap(),
            (6.0 * 3f64.ln() / 0.08).sqrt(),
            max_relative = 1e-12
        );
        assert!(model_i_levels(
            Kind::Anabolic,
            &ModelParams::model_ii(model_i(0.1).alphabet, model_i(0.1).foodset, 0.1, 0.1, 0.5)
                .unwrap()
        )
        .is_err());
    }

    #[test]
    fn levels_only_in_their_phase() {
        let pf = PhaseFunctions::anabolic_lemma(3, 0.5).unwrap();
        let a = characteristic_levels(&pf, 0.6).unwrap();
        assert!(a.n0.is_none() && a.m0.is_none() && a.asymptotic.n0.is_none());
        let b = characteristic_levels(&pf, 0.72).unwrap();
        assert!(b.n0.is_none() && b.m0.is_some() && b.m0_prime.is_some());
        let c = characteristic_levels(&pf, 0.9).unwrap();
        assert!(c.n0.is_some() && c.n0_prime.is_some() && c.m0.is_some());
        assert!(c.n0.unwrap() < c.n0_prime.unwrap());
    }

    #[test]
    fn n0_matches_schedule_argmax() {
        let pf = PhaseFunctions::anabolic_lemma(3, 0.5).unwrap();
        for z in [0.8, 0.9, 0.95] {
            let s = pf.schedule_at(z).unwrap();
            let argmax = (0..200)
                .max_by(|&a, &b| s.mean_level_size(a).total_cmp(&s.mean_level_size(b)))
                .unwrap();
            assert_eq!(characteristic_levels(&pf, z).unwrap().n0, Some(argmax));
            let pargmax = (1..200)
                .max_by(|&a, &b| s.primitive_mean(a).total_cmp(&s.primitive_mean(b)))
                .unwrap();
            assert_eq!(characteristic_levels(&pf, z).unwrap().m0, Some(pargmax));
        }
    }

    #[test]
    fn slopes_approach_phase_functions() {
        let pf = PhaseFunctions::anabolic_lemma(3, 0.1).unwrap();
        let n = 200;
        for z in [0.5, 0.7] {
            let prm = pf.params_at(z).unwrap();
            let (m, next) = (
                predicted_level_means(Kind::Anabolic, &prm, n),
                predicted_level_means(Kind::Anabolic, &prm, n + 1),
            );
            assert_relative_eq!(
                m.size.ln() / n as f64,
                pf.psi(z).unwrap(),
                max_relative = 0.02
            );
            // The primitive mean carries an O(ln p) offset, so compare increments.
            assert_relative_eq!(
                next.primitives.ln() - m.primitives.ln(),
                pf.phi(z).unwrap(),
                max_relative = 0.02
            );
        }
    }

    #[test]
    fn model_ii_means_reduce_to_model_i() {
        let a = model_i(0.08);
        let near =
            ModelParams::model_ii(a.alphabet, a.foodset.clone(), 0.08, 0.08, 1.0 - 1e-13).unwrap();
        for kind in [Kind::Anabolic, Kind::Catabolic] {
            for n in [0, 3, 10] {
                let (x, y) = (
                    predicted_level_means(kind, &a, n),
                    predicted_level_means(kind, &near, n),
                );
                assert_relative_eq!(x.size, y.size, max_relative = 1e-9);
                assert_relative_eq!(x.primitives, y.primitives, max_relative = 1e-9);
            }
        }
    }
}
