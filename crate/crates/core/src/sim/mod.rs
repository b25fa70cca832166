//! Minute-resolution evaluation of a schedule.
//!
//! Requests arrive as per-hour Poisson streams (inter-arrival gaps
//! `(−ln u)/λ`, truncated at hour end), queue per job type, and abandon with
//! probability `1 − exp(−ε·t)` checked at every whole minute of waiting.
//! Dispatch favors the longest-idle eligible employee; service time is the
//! job's mean time divided by the employee's instantaneous performance
//! (capped at 10×). In the emotional mode, working-time factors are updated
//! at every hour boundary, emotions are re-assessed, impairment is graded
//! (a severe grade pulls the employee from duty and is recorded as a
//! constraint violation), and the performance curves are re-derived.
//!
//! Common random numbers: all randomness is keyed to the instance seed and
//! request identities, never to the schedule, so two evaluations of different
//! schedules see the same arrivals and the same per-request abandonment
//! deadlines.

mod engine;

pub use engine::{EvalMode, SimContext};

use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::nfn::{EmotionAssessor, ImpairmentAssessor};
use crate::rng;
use crate::schedule::Schedule;
use crate::{Error, Result};

/// Upper bound of the cancellation-wait histogram, minutes.
pub const CANCEL_HISTOGRAM_MINUTES: usize = 240;

/// One pre-generated request arrival. `cancel_after` is the whole waiting
/// minute at which the request abandons if still unserved — fixed by the
/// per-request draw stream, independent of the schedule.
#[derive(Debug, Clone, Copy)]
pub struct Arrival {
    pub time: f64,
    pub category: u16,
    pub class: u8,
    pub cancel_after: u32,
}

/// Generates every arrival of the horizon from dedicated per-(j,l) streams,
/// sorted by time.
pub fn build_arrivals(ins: &Instance, seed: u64) -> Vec<Arrival> {
    use rand::Rng;
    let days = ins.horizon_days();
    let horizon_minutes = (days * 24 * 60) as u32;
    let mut all = Vec::new();
    for j in 0..ins.n_categories() {
        for l in 0..2 {
            let mut stream =
                rng::stream(seed, &[rng::tag("arrivals"), j as u64, l as u64]);
            let eps = ins.job_params[j].class(l).cancel_coeff;
            let mut seq: u64 = 0;
            for d in 0..days {
                for h in 0..24 {
                    let rate = ins.rate(j, l, h, d);
                    if rate <= 0.0 {
                        continue;
                    }
                    let hour_start = ((d * 24 + h) * 60) as f64;
                    let hour_end = hour_start + 60.0;
                    let mut t = hour_start;
                    loop {
                        let u: f64 = stream.random_range(0.0..1.0);
                        let u = if u > 0.0 { u } else { f64::MIN_POSITIVE };
                        t += 60.0 * (-u.ln()) / rate;
                        if t >= hour_end {
                            break;
                        }
                        let cancel_after =
                            cancellation_minute(seed, j, l, seq, eps, horizon_minutes);
                        all.push(Arrival {
                            time: t,
                            category: j as u16,
                            class: l as u8,
                            cancel_after,
                        });
                        seq += 1;
                    }
                }
            }
        }
    }
    all.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then(a.category.cmp(&b.category))
            .then(a.class.cmp(&b.class))
    });
    all
}

/// The waiting minute at which a request abandons: the first whole minute `k`
/// whose independent draw falls below `1 − exp(−ε·k)`. Draws are stateless
/// hashes of (seed, job type, request sequence, minute).
pub fn cancellation_minute(
    seed: u64,
    j: usize,
    l: usize,
    seq: u64,
    eps: f64,
    cap_minutes: u32,
) -> u32 {
    let tag = rng::tag("cancel");
    for k in 1..=cap_minutes {
        let u = rng::hash_unit(seed, &[tag, j as u64, l as u64, seq, k as u64]);
        if u < 1.0 - (-eps * k as f64).exp() {
            return k;
        }
    }
    cap_minutes + 1
}

/// A static (schedule-only) or dynamic (simulation-observed) constraint
/// violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintViolation {
    /// Daily hours above the daily cap.
    DailyHours { employee: usize, day: usize, hours: u32 },
    /// Hours in the 31-day window starting at `window_start` above the
    /// monthly cap.
    WindowHours { employee: usize, window_start: usize, hours: u32 },
    /// Severe impairment onset observed at the end of the given hour.
    Impairment { employee: usize, day: usize, hour: usize },
}

impl ConstraintViolation {
    pub fn employee(&self) -> usize {
        match *self {
            ConstraintViolation::DailyHours { employee, .. }
            | ConstraintViolation::WindowHours { employee, .. }
            | ConstraintViolation::Impairment { employee, .. } => employee,
        }
    }

    pub fn is_static(&self) -> bool {
        !matches!(self, ConstraintViolation::Impairment { .. })
    }
}

/// Flags every daily-cap and 31-day-window violation in the schedule.
/// Impairment is dynamic and only observable by simulation.
pub fn check_constraints(ins: &Instance, sched: &Schedule) -> Vec<ConstraintViolation> {
    assert_eq!(
        (sched.m(), sched.days()),
        (ins.m(), ins.horizon_days()),
        "schedule dimensions must match the instance"
    );
    let daily_cap = ins.globals.daily_cap_hours;
    let window_cap = ins.globals.monthly_cap_hours;
    let days = ins.horizon_days();
    let mut out = Vec::new();
    for i in 0..ins.m() {
        for d in 0..days {
            let hours = sched.daily_hours(i, d);
            if hours > daily_cap {
                out.push(ConstraintViolation::DailyHours { employee: i, day: d, hours });
            }
        }
        if days >= 31 {
            for d in 0..=(days - 31) {
                let hours = sched.window_hours(i, d);
                if hours > window_cap {
                    out.push(ConstraintViolation::WindowHours {
                        employee: i,
                        window_start: d,
                        hours,
                    });
                }
            }
        }
    }
    out
}

/// Everything one simulation run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub n_categories: usize,
    pub horizon_days: usize,
    /// Dense `[j][l][h][d]` arrival counts.
    pub arrived: Vec<u32>,
    /// Dense `[j][l][h][d]` delayed counts (request not served within its
    /// class threshold), attributed to the hour it became delayed.
    pub delayed: Vec<u32>,
    /// Dense `[j][l][h][d]` cancellation counts, attributed to the hour of
    /// abandonment.
    pub canceled: Vec<u32>,
    /// Served requests per `[j][l]`.
    pub served_by_type: Vec<u64>,
    pub f_delay: f64,
    pub f_cancel: f64,
    /// `f = f_delay + cancel_weight·f_cancel`.
    pub f: f64,
    pub violations: Vec<ConstraintViolation>,
    /// Requests still waiting when the horizon ended (they are counted as
    /// canceled in the final hour).
    pub carried_queue_size: u32,
    /// Requests mid-service when the horizon ended.
    pub in_service_at_end: u32,
    pub total_arrived: u64,
    pub total_served: u64,
    pub total_delayed: u64,
    pub total_canceled: u64,
    /// Histogram of waiting minutes at draw-based abandonment (saturating at
    /// [`CANCEL_HISTOGRAM_MINUTES`]); horizon-end conversions are excluded.
    pub cancel_wait_histogram: Vec<u32>,
    /// Performance-curve derivations performed during this evaluation.
    pub curve_derivations: u64,
}

impl SimOutcome {
    #[inline]
    pub fn cell(&self, j: usize, l: usize, h: usize, d: usize) -> usize {
        ((j * 2 + l) * 24 + h) * self.horizon_days + d
    }

    /// Static violations only (daily/window).
    pub fn static_violations(&self) -> impl Iterator<Item = &ConstraintViolation> {
        self.violations.iter().filter(|v| v.is_static())
    }

    pub fn impairment_violations(&self) -> impl Iterator<Item = &ConstraintViolation> {
        self.violations.iter().filter(|v| !v.is_static())
    }
}

/// One trace record for debugging; see [`SimContext::evaluate_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub time_min: f64,
    pub event: &'static str,
    /// Employee id, or -1 when not applicable.
    pub employee_id: i64,
    pub category: usize,
    pub class: usize,
    pub wait_min: f64,
}

impl TraceEvent {
    pub const CSV_HEADER: &'static str = "time_min,event,employee_id,category,class,wait_min";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.time_min, self.event, self.employee_id, self.category, self.class, self.wait_min
        )
    }
}

/// Runs one full simulation of `sched` on `ins` under the emotional model.
///
/// Identical `(ins, sched, seed)` produce identical outcomes. For repeated
/// evaluations of many schedules against one instance and seed, build a
/// [`SimContext`] once and call [`SimContext::evaluate`].
pub fn simulate(
    ins: &Instance,
    sched: &Schedule,
    emotion: &EmotionAssessor,
    impair: &ImpairmentAssessor,
    seed: u64,
) -> Result<SimOutcome> {
    let violations = ins.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidInstance(violations.join("; ")));
    }
    let ctx = SimContext::new(ins, emotion, impair, seed, EvalMode::Emotional)?;
    ctx.try_evaluate(sched)
}

#[cfg(test)]
pub(crate) mod tests;
