use serde::{Deserialize, Serialize};

use crate::{GwError, GwSchedule};

/// Growth regime: `A` for `n ≤ n₀`, `B` beyond, refined by whether
/// `1 − s₁` is below (`1`) or above (`2`) `1/m_{1,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    A1,
    A2,
    B1,
    B2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundStatus {
    Valid,
    /// The denominator or the `p_k(1 − s) < 1/2` condition fails.
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtinctionEstimate {
    pub n: u32,
    /// `u_{0,n} = f^{(n)}(0)`.
    pub u_exact: f64,
    /// `1 − u_{0,n}`, computed without cancellation.
    pub survival: f64,
    /// Lower bound on `u_{0,n}`; `None` when the upper survival bound is
    /// inapplicable.
    pub lower: Option<f64>,
    /// Upper bound on `u_{0,n}`.
    pub upper: f64,
    pub survival_lower: f64,
    pub survival_upper: Option<f64>,
    pub upper_status: BoundStatus,
    pub regime: Regime,
}

impl ExtinctionEstimate {
    /// Whether the exact value sits inside the bounds, up to relative `tol`
    /// on the survival scale.
    pub fn contains_exact(&self, tol: f64) -> bool {
        let lo_ok = self.survival >= self.survival_lower * (1.0 - tol);
        let hi_ok = self
            .survival_upper
            .map_or(true, |u| self.survival <= u * (1.0 + tol));
        lo_ok && hi_ok
    }
}

impl GwSchedule {
    /// One backward step on the complement scale:
    /// `1 − f_k(1 − c) = −expm1(|A| ln(1 − p_k c))`.
    fn complement_step(&self, k: u32, c: f64) -> f64 {
        -(self.alphabet_size() as f64 * (-self.progeny_prob(k) * c).ln_1p()).exp_m1()
    }

    /// `1 − f^{(n)}(1 − c)`. Accurate when `f^{(n)}` is close to one.
    pub fn complement_iterate(&self, n: u32, c: f64) -> f64 {
        (1..=n).rev().fold(c, |c, k| self.complement_step(k, c))
    }

    /// `f^{(n)}(s) = f_1(f_2(⋯ f_n(s)))`, with `f^{(0)}(s) = s`.
    pub fn iterate_backward(&self, n: u32, s: f64) -> Result<f64, GwError> {
        if !(0.0..=1.0).contains(&s) {
            return Err(GwError::Domain(s));
        }
        let mut v = s;
        for k in (1..=n).rev() {
            v = self.generating_fn(k, v)?;
        }
        Ok(v)
    }

    /// `u_{0,n} = f^{(n)}(0)`.
    pub fn extinction_prob(&self, n: u32) -> f64 {
        self.iterate_backward(n, 0.0).expect("0 lies in the domain")
    }

    /// `1 − u_{j,n}` for `j = 0..=n`.
    pub fn survival_profile(&self, n: u32) -> Vec<f64> {
        let mut c = vec![0.0; n as usize + 1];
        c[n as usize] = 1.0;
        for j in (0..n).rev() {
            c[j as usize] = self.complement_step(j + 1, c[j as usize + 1]);
        }
        c
    }

    /// `(f^{(n)})'(1)` by a one-sided difference on the complement scale.
    pub fn numeric_mean(&self, n: u32) -> f64 {
        let h = (-40.0f64).exp2();
        self.complement_iterate(n, h) / h
    }

    /// Non-trivial fixed point of `s = f_n(s)`, present iff `|A| p_n > 1`.
    pub fn fixed_point(&self, n: u32) -> Option<f64> {
        let a = self.alphabet_size() as f64;
        if a * self.progeny_prob(n) <= 1.0 {
            return None;
        }
        let g = |s: f64| self.generating_fn(n, s).expect("in domain") - s;
        let (mut lo, mut hi) = (0.0, 1.0 - 1e-12);
        if g(hi) > 0.0 {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// Exact extinction probability together with the sandwich bounds from the
/// `η_k` recursions.
///
/// With `Q_k = ∏_{i=k+1}^n |A|p_i` and `η_k = Q_k/(1 − u_{k,n})`:
/// `1 − u_{0,n} ≥ Q_0/(η_{n−1} + Σ_{k=0}^{n−2} Q_k)` and, when every
/// `p_{k+1}(1 − u_{k+1,n}) < 1/2` and the denominator stays positive,
/// `1 − u_{0,n} ≤ Q_0/(η_{n−1} − Σ_{k=0}^{n−2} Q_k/|A|)`.
pub fn extinction_bounds(schedule: &GwSchedule, n: u32) -> Result<ExtinctionEstimate, GwError> {
    if n == 0 {
        return Err(GwError::Level { n, min: 1 });
    }
    let a = schedule.alphabet_size() as f64;
    let ln_a = a.ln();
    let c = schedule.survival_profile(n);
    let survival = c[0];
    let u_exact = schedule.extinction_prob(n);

    // ln Q_k for k = 0..n, with Q_n = 1.
    let mut ln_q = vec![0.0; n as usize + 1];
    for k in (0..n as usize).rev() {
        ln_q[k] = ln_q[k + 1] + ln_a + schedule.ln_progeny_prob(k as u32 + 1);
    }
    let nn = n as usize;
    // Everything is scaled by Q_0 to keep the ratios finite.
    let eta_last = (ln_q[nn - 1] - c[nn - 1].ln() - ln_q[0]).exp();
    let sum: f64 = (0..nn.saturating_sub(1))
        .map(|k| (ln_q[k] - ln_q[0]).exp())
        .sum();

    let survival_lower = (1.0 / (eta_last + sum)).min(1.0);
    let condition = (1..nn).all(|i| schedule.progeny_prob(i as u32) * c[i] < 0.5);
    let denom = eta_last - sum / a;
    let (survival_upper, upper_status) = if condition && denom > 0.0 {
        (Some(1.0 / denom), BoundStatus::Valid)
    } else {
        (None, BoundStatus::Inapplicable)
    };

    let s1_complement = c[nn - 1];
    let big_a = n <= schedule.n0();
    let small = s1_complement < 1.0 / schedule.mean_level_size(n);
    let regime = match (big_a, small) {
        (true, true) => Regime::A1,
        (true, false) => Regime::A2,
        (false, true) => Regime::B1,
        (false, false) => Regime::B2,
    };

    Ok(ExtinctionEstimate {
        n,
        u_exact,
        survival,
        lower: survival_upper.map(|s| (1.0 - s).max(0.0)),
        upper: 1.0 - survival_lower,
        survival_lower,
        survival_upper,
        upper_status,
        regime,
    })
}
