//! Global mutation over long-term schedules.
//!
//! A solution's wavelength bounds the share of employees rescheduled this
//! generation: `m_X = ⌊m·U(0,Λ)⌋` employees are drawn, and each selected
//! employee's day pattern is changed by one uniformly chosen applicable
//! operator:
//!
//! * MUT1 — drop a working day (top-2/3 by working days), handing its jobs to
//!   one or two lightly loaded colleagues;
//! * MUT2 — add a working day (bottom-2/3);
//! * MUT3 — swap a working day with a rest day;
//! * MUT4 — swap complementary working days between two employees.

use rand::Rng;

use crate::instance::JobType;
use crate::schedule::{Assignment, Schedule};
use crate::sim::SimContext;

use super::can_add_hour;
use super::init::shuffle;

/// Membership in the top/bottom two thirds by working-day count (the middle
/// third belongs to both). Ties broken by employee id.
pub struct DayCountTiers {
    pub top: Vec<bool>,
    pub bottom: Vec<bool>,
}

pub fn day_count_tiers(sched: &Schedule) -> DayCountTiers {
    let m = sched.m();
    let counts: Vec<u32> = (0..m).map(|i| sched.working_days(i)).collect();
    let k = (2 * m).div_ceil(3);
    let mut by_desc: Vec<usize> = (0..m).collect();
    by_desc.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    let mut top = vec![false; m];
    for &i in by_desc.iter().take(k) {
        top[i] = true;
    }
    let mut by_asc: Vec<usize> = (0..m).collect();
    by_asc.sort_by(|&a, &b| counts[a].cmp(&counts[b]).then(a.cmp(&b)));
    let mut bottom = vec![false; m];
    for &i in by_asc.iter().take(k) {
        bottom[i] = true;
    }
    DayCountTiers { top, bottom }
}

/// Mutates `sched` in place; returns the number of employees touched.
pub fn mutate(sched: &mut Schedule, ctx: &SimContext, wavelength: f64, rng: &mut impl Rng) -> usize {
    let m = sched.m();
    let share: f64 = rng.random_range(0.0..wavelength.max(f64::MIN_POSITIVE));
    let m_x = (m as f64 * share).floor() as usize;
    if m_x == 0 {
        return 0;
    }
    let tiers = day_count_tiers(sched);
    let mut picks: Vec<usize> = (0..m).collect();
    shuffle(&mut picks, rng);
    picks.truncate(m_x);

    let mut touched = 0;
    for i in picks {
        let mut applicable = Vec::with_capacity(4);
        let working: Vec<usize> = (0..sched.days()).filter(|&d| sched.works_on(i, d)).collect();
        let resting: Vec<usize> = (0..sched.days()).filter(|&d| !sched.works_on(i, d)).collect();
        if tiers.top[i] && !working.is_empty() {
            applicable.push(0);
        }
        if tiers.bottom[i] && !resting.is_empty() {
            applicable.push(1);
        }
        if !working.is_empty() && !resting.is_empty() {
            applicable.push(2);
        }
        if !working.is_empty() && swap_partner(sched, i, rng).is_some() {
            applicable.push(3);
        }
        if applicable.is_empty() {
            continue;
        }
        let op = applicable[rng.random_range(0..applicable.len())];
        let changed = match op {
            0 => add_rest_day(sched, ctx, i, &tiers, rng),
            1 => add_working_day(sched, ctx, i, rng),
            2 => swap_work_rest_day(sched, i, rng),
            _ => swap_between_employees(sched, i, rng),
        };
        if changed {
            touched += 1;
        }
    }
    touched
}

/// MUT1: turn one working day into a rest day and hand the released jobs to
/// one or two bottom-tier colleagues (a second recipient only when the first
/// would breach the daily cap).
pub fn add_rest_day(
    sched: &mut Schedule,
    ctx: &SimContext,
    i: usize,
    tiers: &DayCountTiers,
    rng: &mut impl Rng,
) -> bool {
    let working: Vec<usize> = (0..sched.days()).filter(|&d| sched.works_on(i, d)).collect();
    let Some(&d) = pick(&working, rng) else { return false };
    let released = sched.clear_day(i, d);

    let mut recipients: Vec<usize> =
        (0..sched.m()).filter(|&k| k != i && tiers.bottom[k]).collect();
    shuffle(&mut recipients, rng);
    recipients.truncate(2);
    for (h, job) in released {
        for &k in &recipients {
            if matches!(sched.get(k, d, h), Assignment::Rest)
                && can_add_hour(sched, ctx.ins, k, d)
            {
                sched.set(k, d, h, Assignment::Job(job));
                break;
            }
        }
        // Hours no recipient can take stay unassigned: the queue absorbs them.
    }
    true
}

/// MUT2: add a working day sized like the employee's typical day, drawing job
/// types from that day's expected load.
pub fn add_working_day(
    sched: &mut Schedule,
    ctx: &SimContext,
    i: usize,
    rng: &mut impl Rng,
) -> bool {
    let ins = ctx.ins;
    let resting: Vec<usize> = (0..sched.days()).filter(|&d| !sched.works_on(i, d)).collect();
    let Some(&d) = pick(&resting, rng) else { return false };
    let mut counts: Vec<u32> =
        (0..sched.days()).map(|dd| sched.daily_hours(i, dd)).filter(|&c| c > 0).collect();
    counts.sort_unstable();
    let quota = counts.get(counts.len() / 2).copied().unwrap_or(ins.globals.avg_daily_hours as u32).max(1);

    let mut hours: Vec<usize> = (0..24)
        .filter(|&h| {
            (0..ins.n_categories()).any(|j| (0..2).any(|l| ins.rate(j, l, h, d) > 0.0))
        })
        .collect();
    shuffle(&mut hours, rng);
    let mut added = 0;
    for &h in &hours {
        if added >= quota {
            break;
        }
        if !can_add_hour(sched, ins, i, d) {
            break;
        }
        let Some(job) = weighted_job(ins, h, d, rng) else { continue };
        sched.set(i, d, h, Assignment::Job(job));
        added += 1;
    }
    added > 0
}

/// MUT3: move one working day's jobs onto a former rest day.
pub fn swap_work_rest_day(sched: &mut Schedule, i: usize, rng: &mut impl Rng) -> bool {
    let working: Vec<usize> = (0..sched.days()).filter(|&d| sched.works_on(i, d)).collect();
    let resting: Vec<usize> = (0..sched.days()).filter(|&d| !sched.works_on(i, d)).collect();
    let (Some(&d_work), Some(&d_rest)) = (pick(&working, rng), pick(&resting, rng)) else {
        return false;
    };
    let released = sched.clear_day(i, d_work);
    place_jobs_on_free_day(sched, i, d_rest, &released, rng);
    true
}

/// MUT4: swap a working day of `i` with a working day of a partner who rests
/// on `i`'s day and vice versa; both days' hours are rebuilt.
pub fn swap_between_employees(sched: &mut Schedule, i: usize, rng: &mut impl Rng) -> bool {
    let Some((k, d_i, d_k)) = swap_partner(sched, i, rng) else { return false };
    let from_i = sched.clear_day(i, d_i);
    let from_k = sched.clear_day(k, d_k);
    place_jobs_on_free_day(sched, i, d_k, &from_i, rng);
    place_jobs_on_free_day(sched, k, d_i, &from_k, rng);
    true
}

/// A partner `k` with a working day on one of `i`'s rest days while resting
/// on one of `i`'s working days.
fn swap_partner(sched: &Schedule, i: usize, rng: &mut impl Rng) -> Option<(usize, usize, usize)> {
    let mut candidates: Vec<usize> = (0..sched.m()).filter(|&k| k != i).collect();
    shuffle(&mut candidates, rng);
    for k in candidates {
        let d_i: Vec<usize> = (0..sched.days())
            .filter(|&d| sched.works_on(i, d) && !sched.works_on(k, d))
            .collect();
        let d_k: Vec<usize> = (0..sched.days())
            .filter(|&d| sched.works_on(k, d) && !sched.works_on(i, d))
            .collect();
        if let (Some(&a), Some(&b)) = (pick(&d_i, rng), pick(&d_k, rng)) {
            return Some((k, a, b));
        }
    }
    None
}

/// Re-places a job multiset on a day the employee currently rests.
fn place_jobs_on_free_day(
    sched: &mut Schedule,
    i: usize,
    d: usize,
    jobs: &[(usize, JobType)],
    rng: &mut impl Rng,
) {
    let mut hours: Vec<usize> = (0..24).collect();
    shuffle(&mut hours, rng);
    let mut slot = 0;
    for &(_, job) in jobs {
        if slot >= hours.len() {
            break;
        }
        sched.set(i, d, hours[slot], Assignment::Job(job));
        slot += 1;
    }
}

/// Draws a job type proportionally to the expected arrivals at `(h, d)`.
fn weighted_job(
    ins: &crate::instance::Instance,
    h: usize,
    d: usize,
    rng: &mut impl Rng,
) -> Option<JobType> {
    let mut total = 0.0;
    for j in 0..ins.n_categories() {
        for l in 0..2 {
            total += ins.rate(j, l, h, d);
        }
    }
    if total <= 0.0 {
        return None;
    }
    let mut u: f64 = rng.random_range(0.0..total);
    for j in 0..ins.n_categories() {
        for l in 0..2 {
            u -= ins.rate(j, l, h, d);
            if u < 0.0 {
                return Some(JobType { category: j, class: l });
            }
        }
    }
    Some(JobType { category: ins.n_categories() - 1, class: 1 })
}

fn pick<'a, T>(v: &'a [T], rng: &mut impl Rng) -> Option<&'a T> {
    if v.is_empty() {
        None
    } else {
        Some(&v[rng.random_range(0..v.len())])
    }
}
