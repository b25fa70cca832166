//! Default model parameters.
//!
//! Every calibrated constant (curve baselines per class, labor caps, objective
//! weight, service times, wait thresholds, impairment grading, optimizer and
//! network hyperparameters) lives in the checked-in `defaults.json` next to
//! this crate's manifest, so the whole parameterization is auditable in one
//! place. Code never hardcodes these values; it reads them through
//! [`Defaults::get`].

use std::sync::OnceLock;

use serde::Deserialize;

use crate::perf::CurveBaselines;

const DEFAULTS_JSON: &str = include_str!("../defaults.json");

/// A `{easy, hard}` pair of per-class values.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct PerClass<T> {
    pub easy: T,
    pub hard: T,
}

impl<T: Copy> PerClass<T> {
    /// Value for class index 0 (easy) or 1 (hard).
    pub fn class(&self, l: usize) -> T {
        if l == 0 {
            self.easy
        } else {
            self.hard
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct ImpairmentThresholds {
    pub mild: f64,
    pub moderate: f64,
    pub severe: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct OptimizerDefaults {
    pub pop_max: usize,
    pub pop_min: usize,
    pub ns_min: usize,
    pub ns_max: usize,
    pub alpha: f64,
    pub lambda_init: f64,
    pub gamma: f64,
    pub evals_per_employee: u64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct DqnDefaults {
    pub hidden: usize,
    pub learning_rate: f64,
    pub replay_capacity: usize,
    pub replay_batch: usize,
    pub replay_min: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct NfnDefaults {
    pub rules: usize,
    pub rls_delta: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Defaults {
    pub curve_baselines: PerClass<CurveBaselines>,
    pub daily_cap_hours: u32,
    pub monthly_cap_hours: u32,
    pub cancel_weight: f64,
    pub avg_daily_hours: f64,
    pub mean_service_time: PerClass<f64>,
    pub job_weight: PerClass<f64>,
    pub wait_threshold: PerClass<f64>,
    pub impairment_thresholds: ImpairmentThresholds,
    pub service_time_mode: String,
    pub optimizer: OptimizerDefaults,
    pub dqn: DqnDefaults,
    pub nfn: NfnDefaults,
}

impl Defaults {
    pub fn get() -> &'static Defaults {
        static CELL: OnceLock<Defaults> = OnceLock::new();
        CELL.get_or_init(|| {
            serde_json::from_str(DEFAULTS_JSON).expect("defaults.json is well-formed")
        })
    }
}
