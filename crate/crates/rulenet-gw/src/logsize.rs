use quadrature::double_exponential::integrate;
use serde::{Deserialize, Serialize};

use crate::{GwError, GwSchedule};

/// Quadrature result with a convergence flag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogSize {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveHeight {
    /// Central difference with step `1e-4`.
    pub value: f64,
    /// Same with half the step.
    pub half_step: f64,
    /// Set when the two estimates disagree beyond `1e-3` relative.
    pub unstable: bool,
    /// `P[G > 0]`.
    pub prob_nonzero: f64,
}

const TOL: f64 = 1e-11;
/// Range of `y = ln τ` covered by the Frullani integrals.
const Y_MIN: f64 = -50.0;

/// Integrates `g` over `[a, b]` in unit pieces.
fn integrate_pieces(g: impl Fn(f64) -> f64, a: f64, b: f64) -> LogSize {
    let pieces = (b - a).ceil().max(1.0) as usize;
    let w = (b - a) / pieces as f64;
    let (mut value, mut err) = (0.0, 0.0);
    for i in 0..pieces {
        let lo = a + i as f64 * w;
        let out = integrate(&g, lo, lo + w, TOL);
        value += out.integral;
        err += out.error_estimate;
    }
    LogSize {
        value,
        error_estimate: err,
        converged: err <= 1e-7 * value.abs().max(1.0),
    }
}

/// `E[log X | X > 0]` for a non-negative variable with complement transform
/// `d(τ) = 1 − E[e^{−τX}]`, via `log X = ∫_0^∞ (e^{−τ} − e^{−τX}) dτ/τ`.
/// `d_inf` is `P[X > 0]`; the integral runs over `y = ln τ`.
fn frullani(d: impl Fn(f64) -> f64, d_inf: f64, y_max: f64) -> LogSize {
    let g = |y: f64| {
        let tau = y.exp();
        d(tau) - (-(-tau).exp_m1()) * d_inf
    };
    let mut out = integrate_pieces(g, Y_MIN, y_max);
    out.value /= d_inf;
    out.error_estimate /= d_inf;
    out
}

impl GwSchedule {
    /// `E[log Z_n | Z_n > 0]`, computed exactly from the generating function.
    pub fn expected_log_size(&self, n: u32) -> Result<LogSize, GwError> {
        if n == 0 {
            return Err(GwError::Level { n, min: 1 });
        }
        let survival = self.survival_profile(n)[0];
        // Z_n ≤ |A|^n, so e^{−τ} is negligible once τ exceeds ~40.
        let y_max = 4.0;
        Ok(frullani(
            |tau| self.complement_iterate(n, -(-tau).exp_m1()),
            survival,
            y_max,
        ))
    }

    /// `∫_0^1 (1 − f^{(n)}(s))/(1 − s) ds = E[1 + 1/2 + ⋯ + 1/Z_n]`, the
    /// harmonic-number approximation of `E[log Z_n]`.
    pub fn harmonic_log_size(&self, n: u32) -> LogSize {
        // Substituting 1 − s = e^{−v}: ∫_0^∞ c(e^{−v}) dv.
        let v_max = self.ln_mean_level_size(n).max(0.0) + 60.0;
        integrate_pieces(|v| self.complement_iterate(n, (-v).exp()), 0.0, v_max)
    }

    /// Fugacity-twisted iterate `f^{(j,n)}(x, u) = f_j(u^{x^j} f^{(j+1,n)}(x, u))`
    /// with `f^{(n+1,n)} = 1`; equals `E[u^{x^j Z_j + ⋯ + x^n Z_n} | Z_{j−1} = 1]`.
    pub fn twisted_iterate_from(&self, j: u32, n: u32, x: f64, u: f64) -> Result<f64, GwError> {
        if !(0.0..=1.0).contains(&u) {
            return Err(GwError::Domain(u));
        }
        let mut v = 1.0;
        for k in (j.max(1)..=n).rev() {
            v = self.generating_fn(k, (u.powf(x.powi(k as i32)) * v).clamp(0.0, 1.0))?;
        }
        Ok(v)
    }

    /// `f^{(1,n)}(x, u)`.
    pub fn twisted_iterate(&self, n: u32, x: f64, u: f64) -> Result<f64, GwError> {
        self.twisted_iterate_from(1, n, x, u)
    }

    /// `1 − E[e^{−τ G(x)}]` for `G(x) = Σ_{k=1}^{n_max} x^k Prim_k`, where each
    /// child slot of a red vertex is red with probability `p_k` and blue with
    /// probability `b_k`. `τ = ∞` gives `P[G > 0]`.
    fn primitive_transform(&self, n_max: u32, x: f64, tau: f64) -> f64 {
        let a = self.alphabet_size() as f64;
        let mut d = 0.0;
        for k in (1..=n_max).rev() {
            let hit = if tau.is_infinite() {
                1.0
            } else {
                -(-(x.powi(k as i32)) * tau).exp_m1()
            };
            let t = self.progeny_prob(k) * d + self.blue_prob(k) * hit;
            d = -(a * (-t).ln_1p()).exp_m1();
        }
        d
    }

    fn log_primitive_total(&self, n_max: u32, x: f64) -> LogSize {
        let d_inf = self.primitive_transform(n_max, x, f64::INFINITY);
        frullani(|tau| self.primitive_transform(n_max, x, tau), d_inf, 4.0)
    }
}

/// Average level of primitive vertices, `⟨Σ n Prim_n / Σ Prim_n⟩` over GW
/// trees with at least one primitive vertex, as the `x`-derivative at `x = 1`
/// of `E[log G(x) | G > 0]`.
pub fn average_primitive_height(
    schedule: &GwSchedule,
    n_max: u32,
) -> Result<PrimitiveHeight, GwError> {
    if n_max == 0 {
        return Err(GwError::Level { n: n_max, min: 1 });
    }
    let diff = |h: f64| {
        let up = schedule.log_primitive_total(n_max, 1.0 + h).value;
        let down = schedule.log_primitive_total(n_max, 1.0 - h).value;
        (up - down) / (2.0 * h)
    };
    let value = diff(1e-4);
    let half_step = diff(5e-5);
    let unstable = !value.is_finite() || (value - half_step).abs() > 1e-3 * value.abs().max(1.0);
    Ok(PrimitiveHeight {
        value,
        half_step,
        unstable,
        prob_nonzero: schedule.primitive_transform(n_max, 1.0, f64::INFINITY),
    })
}
