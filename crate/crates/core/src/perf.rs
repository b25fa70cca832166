//! Short-term working-performance curves.
//!
//! An employee who starts a stint well rested warms up, holds a peak for a
//! while, and then degrades: the curve is two Gaussians sharing the maximum
//! `U` — a rising branch centered at `mu_rise` with deviation `sigma_rise`,
//! a flat peak of length `peak_len`, and a falling branch with deviation
//! `sigma_fall`. Curve parameters are derived from the employee's skill level
//! and five emotional-state levels.

use serde::{Deserialize, Serialize};

/// The five emotional states, each leveled in `[1, 5]` (clamped on
/// construction). Levels are kept as reals because the emotion assessor
/// produces continuous values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionalState {
    pub depression: f64,
    pub activation: f64,
    pub anxiety: f64,
    pub concentration: f64,
    pub endurance: f64,
}

impl EmotionalState {
    pub fn new(
        depression: f64,
        activation: f64,
        anxiety: f64,
        concentration: f64,
        endurance: f64,
    ) -> Self {
        let c = |v: f64| if v.is_nan() { 1.0 } else { v.clamp(1.0, 5.0) };
        Self {
            depression: c(depression),
            activation: c(activation),
            anxiety: c(anxiety),
            concentration: c(concentration),
            endurance: c(endurance),
        }
    }

    /// Levels in fixed order: depression, activation, anxiety, concentration,
    /// endurance.
    pub fn as_array(&self) -> [f64; 5] {
        [self.depression, self.activation, self.anxiety, self.concentration, self.endurance]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }
}

/// Baseline rise/peak/fall lengths in minutes for one job class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveBaselines {
    pub t_rise: f64,
    pub t_peak: f64,
    pub t_fall: f64,
}

/// A derived performance curve. All times in minutes of continuous work
/// within the current stint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceCurve {
    /// Maximum performance `U` in `[0, 1]`.
    pub u_max: f64,
    /// Initial ratio `Q` in `(0, 1]`: the curve starts at `Q·U`.
    pub q_init: f64,
    /// Rising-branch deviation, minutes.
    pub sigma_rise: f64,
    /// Peak period length, minutes.
    pub peak_len: f64,
    /// Falling-branch deviation, minutes.
    pub sigma_fall: f64,
    /// Rise center: the time at which the curve first reaches `u_max`.
    pub mu_rise: f64,
}

impl PerformanceCurve {
    /// Builds a curve, deriving the rise center from the boundary condition
    /// that the curve starts at `q_init·u_max`: `mu = sigma_rise·sqrt(2·ln(1/q))`,
    /// degenerating to 0 when `q_init = 1` (no rise phase).
    pub fn new(u_max: f64, q_init: f64, sigma_rise: f64, peak_len: f64, sigma_fall: f64) -> Self {
        let mu_rise = if q_init < 1.0 {
            sigma_rise * (2.0 * (1.0 / q_init).ln()).sqrt()
        } else {
            0.0
        };
        Self { u_max, q_init, sigma_rise, peak_len, sigma_fall, mu_rise }
    }

    /// Curve value at the start of a stint, `Q·U`.
    pub fn initial_value(&self) -> f64 {
        self.q_init * self.u_max
    }

    /// End of the peak period, minutes.
    pub fn peak_end(&self) -> f64 {
        self.mu_rise + self.peak_len
    }
}

/// Derives the performance curve for one employee and job class from skill
/// level (in `[0,1]`), emotional state, and the class baselines:
///
/// * `U = skill·(6 − Depression)/5`
/// * `Q = (Activation/6)^(1/2)`
/// * `σ₁ = T_r·((11 − Activation)/5)^(1 + Anxiety/5)`
/// * `peak = T_p·(1 + Concentration/5)·((6 − Anxiety)/5)`
/// * `σ₂ = T_f·(1 + Endurance/5)^((7 − Anxiety)/2)`
pub fn derive_curve(skill: f64, state: &EmotionalState, base: &CurveBaselines) -> PerformanceCurve {
    let skill = skill.clamp(0.0, 1.0);
    let u_max = skill * (6.0 - state.depression) / 5.0;
    let q_init = (state.activation / 6.0).sqrt();
    let sigma_rise =
        base.t_rise * ((11.0 - state.activation) / 5.0).powf(1.0 + state.anxiety / 5.0);
    let peak_len =
        base.t_peak * (1.0 + state.concentration / 5.0) * ((6.0 - state.anxiety) / 5.0);
    let sigma_fall = base.t_fall * (1.0 + state.endurance / 5.0).powf((7.0 - state.anxiety) / 2.0);
    PerformanceCurve::new(u_max, q_init, sigma_rise, peak_len, sigma_fall)
}

/// Instantaneous performance after `t` minutes of continuous work, in
/// `[0, u_max]`.
pub fn performance_at(curve: &PerformanceCurve, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if t < curve.mu_rise {
        let d = t - curve.mu_rise;
        curve.u_max * (-d * d / (2.0 * curve.sigma_rise * curve.sigma_rise)).exp()
    } else if t <= curve.peak_end() {
        curve.u_max
    } else {
        let d = t - curve.peak_end();
        curve.u_max * (-d * d / (2.0 * curve.sigma_fall * curve.sigma_fall)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn easy() -> CurveBaselines {
        CurveBaselines { t_rise: 45.0, t_peak: 24.0, t_fall: 72.0 }
    }

    fn state(d: f64, a: f64, x: f64, c: f64, e: f64) -> EmotionalState {
        EmotionalState::new(d, a, x, c, e)
    }

    #[test]
    fn max_performance_examples() {
        let base = easy();
        let c = derive_curve(1.0, &state(1.0, 3.0, 3.0, 3.0, 3.0), &base);
        assert_eq!(c.u_max, 1.0);
        let c = derive_curve(0.75, &state(3.0, 3.0, 3.0, 3.0, 3.0), &base);
        assert!((c.u_max - 0.45).abs() < 1e-12);
    }

    #[test]
    fn rise_peak_fall_examples() {
        let base = easy();
        // T_r = 45, Activation = 5, Anxiety = 5 → 45·(6/5)² = 64.8
        let c = derive_curve(1.0, &state(3.0, 5.0, 5.0, 3.0, 3.0), &base);
        assert!((c.sigma_rise - 64.8).abs() < 1e-9);
        // T_p = 24, Concentration = 5, Anxiety = 1 → 24·2·1 = 48
        let c = derive_curve(1.0, &state(3.0, 3.0, 1.0, 5.0, 3.0), &base);
        assert!((c.peak_len - 48.0).abs() < 1e-12);
        // T_f = 72, Endurance = 5, Anxiety = 5 → 72·2¹ = 144
        let c = derive_curve(1.0, &state(3.0, 3.0, 5.0, 3.0, 5.0), &base);
        assert!((c.sigma_fall - 144.0).abs() < 1e-9);
    }

    #[test]
    fn curve_starts_at_q_u_and_peaks_at_u() {
        let c = derive_curve(0.8, &state(2.0, 4.0, 3.0, 3.0, 3.0), &easy());
        let start = performance_at(&c, 0.0);
        assert!((start - c.q_init * c.u_max).abs() < 1e-12);
        assert_eq!(performance_at(&c, c.mu_rise), c.u_max);
        assert_eq!(performance_at(&c, c.peak_end()), c.u_max);
    }

    #[test]
    fn tail_fractions() {
        let c = derive_curve(0.9, &state(2.0, 3.5, 2.5, 4.0, 3.0), &easy());
        for (k, frac) in [(1.0, 0.6065), (2.0, 0.1353)] {
            let v = performance_at(&c, c.peak_end() + k * c.sigma_fall);
            assert!((v / c.u_max - frac).abs() < 1e-4, "k={k}: {}", v / c.u_max);
        }
        for (k, frac) in [(1.0, (-0.5f64).exp()), (2.0, (-2.0f64).exp()), (3.0, (-4.5f64).exp())] {
            let v = performance_at(&c, c.peak_end() + k * c.sigma_fall);
            assert!((v / c.u_max - frac).abs() < 1e-9);
        }
    }

    #[test]
    fn continuity_at_breakpoints() {
        let c = derive_curve(1.0, &state(1.5, 3.0, 2.0, 3.0, 4.0), &easy());
        let eps = 1e-7;
        for t in [c.mu_rise - eps, c.mu_rise + eps, c.peak_end() - eps, c.peak_end() + eps] {
            assert!((performance_at(&c, t) - c.u_max).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_q_one_skips_rise() {
        let c = PerformanceCurve::new(0.9, 1.0, 30.0, 20.0, 60.0);
        assert_eq!(c.mu_rise, 0.0);
        assert_eq!(performance_at(&c, 0.0), 0.9);
    }

    #[test]
    fn levels_clamp_on_construction() {
        let s = state(0.0, 7.0, f64::NAN, 3.0, -2.0);
        assert_eq!(s.depression, 1.0);
        assert_eq!(s.activation, 5.0);
        assert_eq!(s.anxiety, 1.0);
        assert_eq!(s.endurance, 1.0);
    }

    proptest! {
        #[test]
        fn value_bounded_by_u_max(
            skill in 0.0..1.0f64,
            d in 1.0..5.0f64, a in 1.0..5.0f64, x in 1.0..5.0f64,
            c in 1.0..5.0f64, e in 1.0..5.0f64,
            t in 0.0..3000.0f64,
        ) {
            let curve = derive_curve(skill, &state(d, a, x, c, e), &easy());
            let v = performance_at(&curve, t);
            prop_assert!(v >= 0.0 && v <= curve.u_max + 1e-15);
        }

        #[test]
        fn monotone_parameter_effects(
            d in 1.0..5.0f64, a in 1.0..5.0f64, x in 1.0..5.0f64,
            c in 1.0..5.0f64, e in 1.0..5.0f64,
            bump in 0.05..1.0f64,
        ) {
            let base = easy();
            let s0 = state(d, a, x, c, e);
            let curve = |s: &EmotionalState| derive_curve(0.8, s, &base);
            let c0 = curve(&s0);

            let up = |v: f64| (v + bump).min(5.0);
            if up(d) > d {
                prop_assert!(curve(&state(up(d), a, x, c, e)).u_max < c0.u_max);
            }
            if up(a) > a {
                let c1 = curve(&state(d, up(a), x, c, e));
                prop_assert!(c1.q_init > c0.q_init);
                prop_assert!(c1.sigma_rise < c0.sigma_rise);
            }
            if up(x) > x {
                let c1 = curve(&state(d, a, up(x), c, e));
                prop_assert!(c1.sigma_rise > c0.sigma_rise);
                prop_assert!(c1.peak_len < c0.peak_len);
                prop_assert!(c1.sigma_fall < c0.sigma_fall);
            }
            if up(c) > c {
                prop_assert!(curve(&state(d, a, x, up(c), e)).peak_len > c0.peak_len);
            }
            if up(e) > e {
                prop_assert!(curve(&state(d, a, x, c, up(e))).sigma_fall > c0.sigma_fall);
            }
        }
    }
}
