//! Synthetic training fixtures for the assessors.
//!
//! Real induction-test data is not available, so the assessors are fitted
//! against a documented hidden ground truth: each emotional state is its
//! baseline grade shifted by nonlinear workload terms (normalized factors,
//! some squared), and the impairment degree is a weighted composite of high
//! depression, high anxiety, and low endurance. Training targets carry
//! Gaussian noise; the noiseless maps double as regression-test oracles.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{EmotionAssessor, FactorRanges, ImpairmentAssessor, StressFactors};
use crate::perf::EmotionalState;
use crate::rng;

/// Noise on emotion training targets, in levels.
pub const EMOTION_NOISE_SIGMA: f64 = 0.2;

/// Noise on impairment training targets.
const IMPAIRMENT_NOISE_SIGMA: f64 = 0.05;

/// Mid-range factor values, handy as a neutral probe point.
pub fn nominal_factors() -> StressFactors {
    StressFactors {
        age: 35.0,
        gender: 0.0,
        bmi: 23.0,
        commuting_hours: 1.0,
        sleeping_hours: 7.0,
        pit: 400.0,
        pit_sad: 500.0,
        yoe: 8.0,
        d_cont: 2.0,
        d_month: 16.0,
        d_season: 48.0,
        t_day: 0.0,
        t_week: 30.0,
        t_month: 130.0,
        t_season: 390.0,
        t_day_hard: 0.0,
        t_week_hard: 10.0,
        t_month_hard: 45.0,
        t_season_hard: 130.0,
    }
}

/// Noiseless emotion map: baseline grades shifted by workload and living
/// factors, clamped to `[1,5]`.
pub fn emotion_ground_truth(
    ranges: &FactorRanges,
    baseline: &EmotionalState,
    f: &StressFactors,
) -> EmotionalState {
    let n = ranges.normalize_all(f);
    let (commute, sleep, yoe) = (n[3], n[4], n[7]);
    let (d_cont, t_day, t_week, t_month, t_season) = (n[8], n[11], n[12], n[13], n[14]);
    let (t_day_hard, t_week_hard) = (n[15], n[16]);
    let bmi_dev = (n[2] - 0.5).abs();

    let depression =
        baseline.depression + 2.0 * t_season * t_season + 0.8 * d_cont - 1.0 * (sleep - 0.5)
            + 0.4 * commute;
    let activation =
        baseline.activation - 1.6 * t_day - 0.8 * d_cont + 0.8 * (sleep - 0.5) - 0.5 * t_week;
    let anxiety = baseline.anxiety + 1.5 * t_week_hard + 0.8 * t_day_hard + 0.5 * commute
        - 0.4 * yoe
        + 0.6 * t_month * t_month;
    let concentration = baseline.concentration - 1.5 * t_day - 0.8 * t_week * t_week
        + 0.6 * (sleep - 0.5)
        - 0.4 * d_cont;
    let endurance = baseline.endurance - 1.8 * t_season * t_season - 0.8 * t_month + 0.6 * yoe
        - 0.8 * bmi_dev;

    EmotionalState::new(depression, activation, anxiety, concentration, endurance)
}

/// Noiseless impairment map in `[0,1]`: rises with depression and anxiety and
/// with lost endurance.
pub fn impairment_ground_truth(state: &EmotionalState) -> f64 {
    let nd = (state.depression - 1.0) / 4.0;
    let nx = (state.anxiety - 1.0) / 4.0;
    let ne = (state.endurance - 1.0) / 4.0;
    let z = 0.45 * nd + 0.35 * nx + 0.20 * (1.0 - ne);
    (1.4 * z - 0.25).clamp(0.0, 1.0)
}

/// Draws a random factor vector satisfying the type invariants.
pub fn random_factors(r: &mut impl Rng, hard_frac: f64) -> StressFactors {
    let d_cont = r.random_range(0.0..8.0);
    let d_month = r.random_range(d_cont..30.0);
    let d_season = r.random_range(d_month..90.0);
    let t_day = r.random_range(0.0..10.0);
    let t_week = r.random_range(t_day..70.0);
    let t_month = r.random_range(t_week..212.0);
    let t_season = r.random_range(t_month..636.0);
    StressFactors {
        age: r.random_range(22.0..58.0),
        gender: if r.random_range(0.0..1.0) < 0.5 { 0.0 } else { 1.0 },
        bmi: r.random_range(18.0..34.0),
        commuting_hours: r.random_range(0.0..3.5),
        sleeping_hours: r.random_range(4.5..9.5),
        pit: r.random_range(0.0..3000.0),
        pit_sad: r.random_range(0.0..2000.0),
        yoe: r.random_range(0.0..35.0),
        d_cont,
        d_month,
        d_season,
        t_day,
        t_week,
        t_month,
        t_season,
        t_day_hard: t_day * hard_frac,
        t_week_hard: t_week * hard_frac,
        t_month_hard: t_month * hard_frac,
        t_season_hard: t_season * hard_frac,
    }
}

fn random_baseline(r: &mut impl Rng) -> EmotionalState {
    let mut g = || r.random_range(0..3) as f64 + 2.0; // grades 2..4
    EmotionalState::new(g(), g(), g(), g(), g())
}

/// `(baseline, factors, noisy target)` triples from the emotion ground truth.
pub fn sample_emotion_set(
    ranges: &FactorRanges,
    n: usize,
    seed: u64,
) -> Vec<(EmotionalState, StressFactors, EmotionalState)> {
    let mut r = rng::stream(seed, &[rng::tag("emotion-fixture")]);
    let noise = Normal::new(0.0, EMOTION_NOISE_SIGMA).unwrap();
    (0..n)
        .map(|_| {
            let baseline = random_baseline(&mut r);
            let hard_frac = r.random_range(0.0..0.6);
            let factors = random_factors(&mut r, hard_frac);
            let clean = emotion_ground_truth(ranges, &baseline, &factors);
            let mut noisy = clean.as_array();
            for v in &mut noisy {
                *v += noise.sample(&mut r);
            }
            (baseline, factors, EmotionalState::from_array(noisy))
        })
        .collect()
}

/// `(state, noisy impairment)` pairs from the impairment ground truth.
pub fn sample_impairment_set(n: usize, seed: u64) -> Vec<(EmotionalState, f64)> {
    let mut r = rng::stream(seed, &[rng::tag("impairment-fixture")]);
    let noise = Normal::new(0.0, IMPAIRMENT_NOISE_SIGMA).unwrap();
    (0..n)
        .map(|_| {
            let state = EmotionalState::new(
                r.random_range(1.0..5.0),
                r.random_range(1.0..5.0),
                r.random_range(1.0..5.0),
                r.random_range(1.0..5.0),
                r.random_range(1.0..5.0),
            );
            let y = (impairment_ground_truth(&state) + noise.sample(&mut r)).clamp(0.0, 1.0);
            (state, y)
        })
        .collect()
}

/// Initializes and trains both assessors on synthetic fixtures. Deterministic
/// in `seed`.
pub fn train_default_assessors(n_rules: usize, seed: u64) -> (EmotionAssessor, ImpairmentAssessor) {
    let mut emotion = EmotionAssessor::init_random(n_rules, rng::derive_seed(seed, &[1]));
    let samples = sample_emotion_set(&emotion.ranges, 600, rng::derive_seed(seed, &[2]));
    for k in 0..5 {
        let batch: Vec<(Vec<f64>, f64)> = samples
            .iter()
            .map(|(baseline, factors, target)| {
                let x = emotion.input_vector(k, baseline, factors).to_vec();
                (x, target.as_array()[k])
            })
            .collect();
        emotion.networks[k].train_sequential(&batch);
    }

    let mut impairment = ImpairmentAssessor::init_random(n_rules, rng::derive_seed(seed, &[3]));
    let batch: Vec<(Vec<f64>, f64)> = sample_impairment_set(400, rng::derive_seed(seed, &[4]))
        .into_iter()
        .map(|(state, y)| (ImpairmentAssessor::input_vector(&state).to_vec(), y))
        .collect();
    impairment.network.train_sequential(&batch);

    (emotion, impairment)
}
