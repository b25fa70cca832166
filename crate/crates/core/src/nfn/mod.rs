//! TSK neuro-fuzzy networks.
//!
//! Two assessors are built from the same network primitive: the emotion
//! assessor maps a baseline grade plus 19 stress/living factors to each of the
//! five emotional-state levels (five 20-input networks), and the impairment
//! assessor maps the five levels to a monolithic impairment degree in `[0,1]`.
//!
//! A network holds `R` rules over `p` inputs. Rule `r` fires with strength
//! `f_r(x) = Π_i exp(−(x_i − c_ri)²/(2·s_ri²))`, strengths are normalized to
//! weights `w_r = f_r/Σf_r`, and the output is the weighted sum of the linear
//! rule consequents `g_r(x) = c_{r0} + Σ_i c_{ri}·x_i`. Antecedents are drawn
//! stochastically and frozen; consequents are trained online by recursive
//! least squares on the blended regressor `[w_1·(1,x), …, w_R·(1,x)]`.

mod synth;
mod train;

pub use synth::{
    emotion_ground_truth, impairment_ground_truth, nominal_factors, random_factors,
    sample_emotion_set, sample_impairment_set, train_default_assessors, EMOTION_NOISE_SIGMA,
};

use serde::{Deserialize, Serialize};

use crate::perf::EmotionalState;
use crate::rng;

/// Initialization factor for the RLS covariance `P₀ = (1/δ)·I`.
pub const RLS_DELTA: f64 = 1e-3;

/// The 19 stress and living factors of one employee at a point in time.
///
/// Working-time fields are hours, day fields are days; `gender` is 0 or 1.
/// `*_hard` fields count hard-class working hours and never exceed their
/// totals; `d_cont ≤ d_month ≤ d_season`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressFactors {
    pub age: f64,
    pub gender: f64,
    pub bmi: f64,
    pub commuting_hours: f64,
    pub sleeping_hours: f64,
    pub pit: f64,
    pub pit_sad: f64,
    pub yoe: f64,
    pub d_cont: f64,
    pub d_month: f64,
    pub d_season: f64,
    pub t_day: f64,
    pub t_week: f64,
    pub t_month: f64,
    pub t_season: f64,
    pub t_day_hard: f64,
    pub t_week_hard: f64,
    pub t_month_hard: f64,
    pub t_season_hard: f64,
}

impl StressFactors {
    /// Factor values in the fixed order used for network inputs and ranges.
    pub fn as_array(&self) -> [f64; 19] {
        [
            self.age,
            self.gender,
            self.bmi,
            self.commuting_hours,
            self.sleeping_hours,
            self.pit,
            self.pit_sad,
            self.yoe,
            self.d_cont,
            self.d_month,
            self.d_season,
            self.t_day,
            self.t_week,
            self.t_month,
            self.t_season,
            self.t_day_hard,
            self.t_week_hard,
            self.t_month_hard,
            self.t_season_hard,
        ]
    }

    /// Invariant violations, each naming field and reason. Empty when valid.
    pub fn violations(&self, prefix: &str) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in FACTOR_NAMES.iter().zip(self.as_array()) {
            if !(v >= 0.0) {
                out.push(format!("{prefix}{name} must be nonnegative (got {v})"));
            }
        }
        for (hard, total, name) in [
            (self.t_day_hard, self.t_day, "t_day_hard"),
            (self.t_week_hard, self.t_week, "t_week_hard"),
            (self.t_month_hard, self.t_month, "t_month_hard"),
            (self.t_season_hard, self.t_season, "t_season_hard"),
        ] {
            if hard > total {
                out.push(format!("{prefix}{name} exceeds its total ({hard} > {total})"));
            }
        }
        if self.d_cont > self.d_month {
            out.push(format!("{prefix}d_cont exceeds d_month"));
        }
        if self.d_month > self.d_season {
            out.push(format!("{prefix}d_month exceeds d_season"));
        }
        out
    }
}

pub const FACTOR_NAMES: [&str; 19] = [
    "age",
    "gender",
    "bmi",
    "commuting_hours",
    "sleeping_hours",
    "pit",
    "pit_sad",
    "yoe",
    "d_cont",
    "d_month",
    "d_season",
    "t_day",
    "t_week",
    "t_month",
    "t_season",
    "t_day_hard",
    "t_week_hard",
    "t_month_hard",
    "t_season_hard",
];

/// Declared min/max per factor, used to scale inputs to `[0,1]` before
/// inference. Mixed raw units would otherwise dominate the memberships.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRanges {
    pub min: [f64; 19],
    pub max: [f64; 19],
}

impl Default for FactorRanges {
    fn default() -> Self {
        FactorRanges {
            //    age  gen  bmi  com  slp  pit   sad   yoe d_c  d_m  d_s  t_d t_w  t_m  t_s  t_d† t_w† t_m† t_s†
            min: [18., 0., 15., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.],
            max: [
                65., 1., 40., 4., 12., 5000., 3000., 40., 30., 30., 90., 10., 70., 212., 636.,
                10., 70., 212., 636.,
            ],
        }
    }
}

impl FactorRanges {
    /// Scales one factor to `[0,1]` (clamped).
    #[inline]
    pub fn normalize(&self, idx: usize, value: f64) -> f64 {
        let span = self.max[idx] - self.min[idx];
        if span <= 0.0 {
            return 0.0;
        }
        ((value - self.min[idx]) / span).clamp(0.0, 1.0)
    }

    /// All 19 factors normalized, in fixed order.
    pub fn normalize_all(&self, f: &StressFactors) -> [f64; 19] {
        let raw = f.as_array();
        let mut out = [0.0; 19];
        for i in 0..19 {
            out[i] = self.normalize(i, raw[i]);
        }
        out
    }
}

/// On-disk form of a network: exactly the persistent parameters. The RLS
/// covariance is runtime training state and is rebuilt as `(1/δ)·I` on load.
#[derive(Serialize, Deserialize)]
struct TskNetworkFile {
    n_inputs: usize,
    n_rules: usize,
    centers: Vec<Vec<f64>>,
    spreads: Vec<Vec<f64>>,
    coefficients: Vec<f64>,
}

/// A TSK network with Gaussian memberships and linear consequents.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "TskNetworkFile", into = "TskNetworkFile")]
pub struct TskNetwork {
    n_inputs: usize,
    n_rules: usize,
    /// `n_rules × n_inputs`, row-major.
    centers: Vec<f64>,
    /// `n_rules × n_inputs`, row-major, strictly positive.
    spreads: Vec<f64>,
    /// `n_rules × (n_inputs + 1)`: per rule `[c_0, c_1, …, c_p]`.
    coefficients: Vec<f64>,
    /// RLS covariance, `p'×p'` with `p' = R·(p+1)`, row-major.
    covariance: Vec<f64>,
}

/// Parameter equality (structure, antecedents, consequents). Training state
/// is not part of a network's value.
impl PartialEq for TskNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.n_inputs == other.n_inputs
            && self.n_rules == other.n_rules
            && self.centers == other.centers
            && self.spreads == other.spreads
            && self.coefficients == other.coefficients
    }
}

impl TskNetwork {
    /// Stochastic initialization: centers uniform over each (normalized)
    /// input's `[0,1]` range, spreads uniform in `[0.2, 0.8]` of the range
    /// width, consequents zeroed, covariance `(1/δ)·I`.
    pub fn init_random(n_inputs: usize, n_rules: usize, seed: u64) -> Self {
        assert!(n_inputs >= 1 && n_rules >= 1);
        use rand::Rng;
        let mut r = rng::stream(seed, &[rng::tag("tsk-init")]);
        let mut centers = Vec::with_capacity(n_rules * n_inputs);
        for _ in 0..n_rules * n_inputs {
            centers.push(r.random_range(0.0..1.0));
        }
        let mut spreads = Vec::with_capacity(n_rules * n_inputs);
        for _ in 0..n_rules * n_inputs {
            spreads.push(r.random_range(0.2..0.8));
        }
        Self::with_antecedents(n_inputs, n_rules, centers, spreads)
    }

    /// Builds a network from explicit antecedents, with zero consequents.
    pub fn with_antecedents(
        n_inputs: usize,
        n_rules: usize,
        centers: Vec<f64>,
        spreads: Vec<f64>,
    ) -> Self {
        assert_eq!(centers.len(), n_rules * n_inputs);
        assert_eq!(spreads.len(), n_rules * n_inputs);
        assert!(spreads.iter().all(|&s| s > 0.0), "spreads must be strictly positive");
        let p_ext = n_rules * (n_inputs + 1);
        Self {
            n_inputs,
            n_rules,
            centers,
            spreads,
            coefficients: vec![0.0; p_ext],
            covariance: fresh_covariance(p_ext),
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_rules(&self) -> usize {
        self.n_rules
    }

    pub fn coefficients(&self) -> &[f64] {
        self.coefficients
            .as_slice()
    }

    pub fn set_coefficients(&mut self, coefficients: Vec<f64>) {
        assert_eq!(coefficients.len(), self.n_rules * (self.n_inputs + 1));
        self.coefficients = coefficients;
    }

    pub fn antecedents(&self) -> (&[f64], &[f64]) {
        (&self.centers, &self.spreads)
    }

    #[cfg(test)]
    pub(crate) fn covariance(&self) -> &[f64] {
        &self.covariance
    }

    /// Normalized firing weights `w_r`. The product of Gaussian memberships is
    /// evaluated as a summed exponent per rule and shifted by the maximum, so
    /// tiny strengths normalize exactly; if every strength underflows to zero
    /// (all exponents `−∞`), weights fall back to uniform `1/R`.
    pub fn firing_weights(&self, x: &[f64], out: &mut Vec<f64>) {
        debug_assert_eq!(x.len(), self.n_inputs);
        out.clear();
        let mut max_e = f64::NEG_INFINITY;
        for r in 0..self.n_rules {
            let row = r * self.n_inputs;
            let mut e = 0.0;
            for i in 0..self.n_inputs {
                let d = x[i] - self.centers[row + i];
                let s = self.spreads[row + i];
                e -= d * d / (2.0 * s * s);
            }
            out.push(e);
            if e > max_e {
                max_e = e;
            }
        }
        if max_e == f64::NEG_INFINITY || max_e.is_nan() {
            let u = 1.0 / self.n_rules as f64;
            out.iter_mut().for_each(|w| *w = u);
            return;
        }
        let mut sum = 0.0;
        for e in out.iter_mut() {
            *e = (*e - max_e).exp();
            sum += *e;
        }
        for e in out.iter_mut() {
            *e /= sum;
        }
    }

    /// Center-of-sets inference: `Σ_r w_r·g_r(x)`.
    pub fn infer(&self, x: &[f64]) -> f64 {
        let mut weights = Vec::with_capacity(self.n_rules);
        self.firing_weights(x, &mut weights);
        self.infer_with_weights(x, &weights)
    }

    #[inline]
    pub(crate) fn infer_with_weights(&self, x: &[f64], weights: &[f64]) -> f64 {
        let mut y = 0.0;
        for (r, &w) in weights.iter().enumerate() {
            let block = r * (self.n_inputs + 1);
            let mut g = self.coefficients[block];
            for i in 0..self.n_inputs {
                g += self.coefficients[block + 1 + i] * x[i];
            }
            y += w * g;
        }
        y
    }
}

fn fresh_covariance(p_ext: usize) -> Vec<f64> {
    let mut cov = vec![0.0; p_ext * p_ext];
    for i in 0..p_ext {
        cov[i * p_ext + i] = 1.0 / RLS_DELTA;
    }
    cov
}

impl TryFrom<TskNetworkFile> for TskNetwork {
    type Error = String;

    fn try_from(f: TskNetworkFile) -> Result<Self, String> {
        let (p, r) = (f.n_inputs, f.n_rules);
        if p < 1 || r < 1 {
            return Err("n_inputs and n_rules must be at least 1".into());
        }
        let flat = |rows: Vec<Vec<f64>>, what: &str| -> Result<Vec<f64>, String> {
            if rows.len() != r || rows.iter().any(|row| row.len() != p) {
                return Err(format!("{what} must be {r}×{p}"));
            }
            Ok(rows.into_iter().flatten().collect())
        };
        let centers = flat(f.centers, "centers")?;
        let spreads = flat(f.spreads, "spreads")?;
        if spreads.iter().any(|&s| !(s > 0.0)) {
            return Err("spreads must be strictly positive".into());
        }
        if f.coefficients.len() != r * (p + 1) {
            return Err(format!("coefficients must have length {}", r * (p + 1)));
        }
        Ok(TskNetwork {
            n_inputs: p,
            n_rules: r,
            centers,
            spreads,
            coefficients: f.coefficients,
            covariance: fresh_covariance(r * (p + 1)),
        })
    }
}

impl From<TskNetwork> for TskNetworkFile {
    fn from(n: TskNetwork) -> Self {
        let rows = |flat: &[f64]| {
            flat.chunks(n.n_inputs).map(|c| c.to_vec()).collect::<Vec<_>>()
        };
        TskNetworkFile {
            n_inputs: n.n_inputs,
            n_rules: n.n_rules,
            centers: rows(&n.centers),
            spreads: rows(&n.spreads),
            coefficients: n.coefficients,
        }
    }
}

/// Index order of the five emotion networks.
pub const EMOTION_NAMES: [&str; 5] =
    ["depression", "activation", "anxiety", "concentration", "endurance"];

/// Five 20-input networks, one per emotional state. Inputs per network: the
/// state's baseline grade followed by the 19 factors, all scaled to `[0,1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionAssessor {
    pub networks: Vec<TskNetwork>,
    pub ranges: FactorRanges,
}

impl EmotionAssessor {
    pub fn init_random(n_rules: usize, seed: u64) -> Self {
        let networks = (0..5)
            .map(|k| TskNetwork::init_random(20, n_rules, rng::derive_seed(seed, &[k as u64])))
            .collect();
        Self { networks, ranges: FactorRanges::default() }
    }

    /// Builds the 20-input vector for state `k`.
    pub fn input_vector(&self, k: usize, baseline: &EmotionalState, f: &StressFactors) -> [f64; 20] {
        let mut x = [0.0; 20];
        x[0] = (baseline.as_array()[k] - 1.0) / 4.0;
        x[1..].copy_from_slice(&self.ranges.normalize_all(f));
        x
    }

    /// Assesses the five states; each raw output is clamped to `[1, 5]`.
    pub fn assess(&self, baseline: &EmotionalState, f: &StressFactors) -> EmotionalState {
        let mut levels = [0.0; 5];
        for k in 0..5 {
            let x = self.input_vector(k, baseline, f);
            levels[k] = self.networks[k].infer(&x).clamp(1.0, 5.0);
        }
        EmotionalState::from_array(levels)
    }

    pub fn save(&self, path: &std::path::Path) -> crate::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("assessor serializes");
        crate::io::write_atomic(path, json.as_bytes())
    }

    pub fn load(path: &std::path::Path) -> crate::Result<Self> {
        let text = crate::io::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| crate::Error::Parse { path: path.to_path_buf(), message: e.to_string() })
    }
}

/// Degree of monolithic performance impairment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ImpairmentGrade {
    None,
    Mild,
    Moderate,
    Severe,
}

/// One 5-input network over the emotional-state levels plus grading
/// thresholds. The raw output is clamped to `[0,1]` before grading; grade
/// boundaries are inclusive upward (a value exactly at a boundary takes the
/// higher grade).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpairmentAssessor {
    pub network: TskNetwork,
    pub severe_threshold: f64,
}

impl ImpairmentAssessor {
    pub fn init_random(n_rules: usize, seed: u64) -> Self {
        Self {
            network: TskNetwork::init_random(5, n_rules, seed),
            severe_threshold: crate::defaults::Defaults::get().impairment_thresholds.severe,
        }
    }

    /// Normalized network input for a state vector.
    pub fn input_vector(state: &EmotionalState) -> [f64; 5] {
        let mut x = state.as_array();
        for v in &mut x {
            *v = (*v - 1.0) / 4.0;
        }
        x
    }

    /// Raw impairment degree in `[0,1]`.
    pub fn degree(&self, state: &EmotionalState) -> f64 {
        self.network.infer(&Self::input_vector(state)).clamp(0.0, 1.0)
    }

    pub fn grade_of(&self, raw: f64) -> ImpairmentGrade {
        let t = crate::defaults::Defaults::get().impairment_thresholds;
        if raw >= self.severe_threshold {
            ImpairmentGrade::Severe
        } else if raw >= t.moderate {
            ImpairmentGrade::Moderate
        } else if raw >= t.mild {
            ImpairmentGrade::Mild
        } else {
            ImpairmentGrade::None
        }
    }

    pub fn assess(&self, state: &EmotionalState) -> ImpairmentGrade {
        self.grade_of(self.degree(state))
    }

    pub fn save(&self, path: &std::path::Path) -> crate::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("assessor serializes");
        crate::io::write_atomic(path, json.as_bytes())
    }

    pub fn load(path: &std::path::Path) -> crate::Result<Self> {
        let text = crate::io::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| crate::Error::Parse { path: path.to_path_buf(), message: e.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_rule_net(center2: f64, spread2: f64, g1: f64, g2: f64) -> TskNetwork {
        let mut net = TskNetwork::with_antecedents(1, 2, vec![0.0, center2], vec![1.0, spread2]);
        net.set_coefficients(vec![g1, 0.0, g2, 0.0]);
        net
    }

    #[test]
    fn single_rule_output_is_consequent() {
        let mut net = TskNetwork::with_antecedents(2, 1, vec![0.3, 0.7], vec![0.5, 0.5]);
        net.set_coefficients(vec![1.5, 2.0, -1.0]);
        let x = [0.9, 0.1];
        let expected = 1.5 + 2.0 * 0.9 - 1.0 * 0.1;
        assert_eq!(net.infer(&x), expected);
    }

    #[test]
    fn symmetric_rules_average() {
        // Both rules equidistant from x = 0.5 with equal spreads.
        let net = two_rule_net(1.0, 1.0, 2.0, 6.0);
        let y = net.infer(&[0.5]);
        assert!((y - 4.0).abs() < 1e-12);
    }

    #[test]
    fn three_to_one_weighting_hand_example() {
        // Rule 1 fires at exp(0)=1, rule 2 at exp(−ln 3)=1/3: weights 3/4 and
        // 1/4, so the defuzzified output is 0.75·2 + 0.25·6 = 3.
        let spread2 = 1.0 / (2.0 * 3.0f64.ln()).sqrt();
        let net = two_rule_net(1.0, spread2, 2.0, 6.0);
        let y = net.infer(&[0.0]);
        assert!((y - 3.0).abs() < 1e-12, "got {y}");
    }

    #[test]
    fn exact_three_to_one_mass_with_equal_firing() {
        // Four rules with identical antecedents fire equally; weights are an
        // exact 1/4 each, so 3:1 consequent mass gives exactly 3.0.
        let mut net =
            TskNetwork::with_antecedents(1, 4, vec![0.5; 4], vec![1.0; 4]);
        net.set_coefficients(vec![2.0, 0.0, 2.0, 0.0, 2.0, 0.0, 6.0, 0.0]);
        assert_eq!(net.infer(&[0.2]), 3.0);
    }

    #[test]
    fn underflow_falls_back_to_uniform_weights() {
        let net = two_rule_net(1.0, 1.0, 2.0, 6.0);
        let mut w = Vec::new();
        net.firing_weights(&[1e200], &mut w);
        assert_eq!(w, vec![0.5, 0.5]);
    }

    #[test]
    fn init_is_deterministic_and_sized() {
        let a = TskNetwork::init_random(20, 12, 99);
        let b = TskNetwork::init_random(20, 12, 99);
        assert_eq!(a, b);
        assert_eq!(a.coefficients().len(), 252);
        assert_eq!(a.infer(&[0.5; 20]), 0.0);
        let c = TskNetwork::init_random(20, 12, 100);
        assert_ne!(a, c);
    }

    #[test]
    fn untrained_assessor_clamps_to_one() {
        let a = EmotionAssessor::init_random(4, 7);
        let baseline = EmotionalState::new(3.0, 3.0, 3.0, 3.0, 3.0);
        let f = synth::nominal_factors();
        let s = a.assess(&baseline, &f);
        assert_eq!(s.as_array(), [1.0; 5]);
    }

    #[test]
    fn ignored_inputs_do_not_change_output() {
        // Give every rule an effectively flat membership on input 3 and a zero
        // consequent coefficient for it: the network ignores that input.
        let p = 4;
        let mut centers = vec![0.5; 2 * p];
        let mut spreads = vec![0.4; 2 * p];
        centers[3] = 0.0;
        centers[p + 3] = 0.0;
        spreads[3] = 1e30;
        spreads[p + 3] = 1e30;
        let mut net = TskNetwork::with_antecedents(p, 2, centers, spreads);
        let mut coefs = vec![0.1; 2 * (p + 1)];
        coefs[4] = 0.0; // rule 1, input 3
        coefs[p + 1 + 4] = 0.0; // rule 2, input 3
        net.set_coefficients(coefs);
        let mut a = [0.3, 0.9, 0.2, 0.1];
        let y1 = net.infer(&a);
        a[3] = 0.95;
        let y2 = net.infer(&a);
        assert_eq!(y1, y2);
    }

    #[test]
    fn impairment_grading_boundaries() {
        let a = ImpairmentAssessor::init_random(4, 1);
        assert_eq!(a.grade_of(0.0), ImpairmentGrade::None);
        assert_eq!(a.grade_of(0.2499), ImpairmentGrade::None);
        assert_eq!(a.grade_of(0.25), ImpairmentGrade::Mild);
        assert_eq!(a.grade_of(0.5), ImpairmentGrade::Moderate);
        assert_eq!(a.grade_of(0.8), ImpairmentGrade::Severe);
        assert_eq!(a.grade_of(0.81), ImpairmentGrade::Severe);
    }

    #[test]
    fn untrained_impairment_is_none() {
        let a = ImpairmentAssessor::init_random(4, 1);
        assert_eq!(a.assess(&EmotionalState::new(5.0, 1.0, 5.0, 1.0, 1.0)), ImpairmentGrade::None);
    }

    #[test]
    fn network_json_round_trip_is_value_exact() {
        let mut net = TskNetwork::init_random(3, 2, 5);
        net.set_coefficients(vec![
            0.1,
            -1.0 / 3.0,
            f64::MIN_POSITIVE,
            1e300,
            -2.5e-17,
            0.0,
            9.007_199_254_740_993e15,
            -0.333_333_333_333_333_37,
        ]);
        let json = serde_json::to_string(&net).unwrap();
        let back: TskNetwork = serde_json::from_str(&json).unwrap();
        assert_eq!(net, back);
    }

    #[test]
    fn malformed_network_rejected() {
        let bad = r#"{"n_inputs":2,"n_rules":1,"centers":[[0.1,0.2]],"spreads":[[0.5,-0.5]],"coefficients":[0,0,0]}"#;
        assert!(serde_json::from_str::<TskNetwork>(bad).is_err());
        let short = r#"{"n_inputs":2,"n_rules":1,"centers":[[0.1,0.2]],"spreads":[[0.5,0.5]],"coefficients":[0,0]}"#;
        assert!(serde_json::from_str::<TskNetwork>(short).is_err());
    }

    proptest! {
        #[test]
        fn weights_sum_to_one(
            x in proptest::collection::vec(-2.0..3.0f64, 4),
            seed in 0u64..500,
        ) {
            let net = TskNetwork::init_random(4, 6, seed);
            let mut w = Vec::new();
            net.firing_weights(&x, &mut w);
            let sum: f64 = w.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }

        #[test]
        fn output_is_convex_combination_of_consequents(
            x in proptest::collection::vec(0.0..1.0f64, 3),
            seed in 0u64..200,
        ) {
            let mut net = TskNetwork::init_random(3, 5, seed);
            let coefs: Vec<f64> = (0..20).map(|i| ((i * 7 + seed as usize) % 11) as f64 - 5.0).collect();
            net.set_coefficients(coefs);
            let mut w = Vec::new();
            net.firing_weights(&x, &mut w);
            let gs: Vec<f64> = (0..5)
                .map(|r| {
                    let b = r * 4;
                    net.coefficients()[b]
                        + (0..3).map(|i| net.coefficients()[b + 1 + i] * x[i]).sum::<f64>()
                })
                .collect();
            let y = net.infer(&x);
            let lo = gs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = gs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(y >= lo - 1e-9 && y <= hi + 1e-9);
        }

        #[test]
        fn json_round_trip_arbitrary_parameters(
            centers in proptest::collection::vec(-1e6..1e6f64, 6),
            spread_bits in proptest::collection::vec(1e-9..1e9f64, 6),
            coefs in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::ZERO, 9),
        ) {
            let mut net = TskNetwork::with_antecedents(2, 3, centers, spread_bits);
            net.set_coefficients(coefs);
            let json = serde_json::to_string(&net).unwrap();
            let back: TskNetwork = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(net, back);
        }
    }
}
