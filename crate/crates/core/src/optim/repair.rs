//! Constraint repair.
//!
//! Violating employees release hours scope-by-scope (latest hour first within
//! the violating day or 31-day window) until their static constraints hold; a
//! severely impaired employee releases everything after the impairment hour.
//! Released hours are re-homed day by day: first to same-day colleagues who
//! are vacant in that hour (lowest daily load first), then to one employee
//! resting the whole day (lowest horizon load), and whatever remains stays
//! unassigned — the waiting queue absorbs it.

use crate::instance::{Instance, JobType};
use crate::schedule::{Assignment, Schedule};

use super::can_add_hour;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RepairReport {
    pub released: usize,
    pub reassigned: usize,
    pub dropped: usize,
}

/// Repairs static (daily/window) violations only.
pub fn repair(sched: &mut Schedule, ins: &Instance, impairments: &[(usize, usize, usize)]) {
    repair_with_impairments(sched, ins, impairments);
}

/// Full repair: impairment releases plus static repair plus re-homing.
/// `impairments` lists `(employee, day, hour)` severe onsets observed by the
/// last simulation.
pub fn repair_with_impairments(
    sched: &mut Schedule,
    ins: &Instance,
    impairments: &[(usize, usize, usize)],
) -> RepairReport {
    let mut released: Vec<(usize, usize, usize, JobType)> = Vec::new();

    // An impaired employee works nothing after the onset hour.
    for &(emp, day, hour) in impairments {
        for d in day..sched.days() {
            for h in 0..24 {
                if d == day && h <= hour {
                    continue;
                }
                if let Assignment::Job(job) = sched.get(emp, d, h) {
                    sched.set(emp, d, h, Assignment::Rest);
                    released.push((emp, d, h, job));
                }
            }
        }
    }

    for i in 0..sched.m() {
        release_static(sched, ins, i, &mut released);
    }

    let impaired: Vec<usize> = impairments.iter().map(|&(e, _, _)| e).collect();
    rehome(sched, ins, released, &impaired)
}

/// Releases hours of employee `i` until no daily or window cap is violated.
/// Within a violating scope the latest working hour goes first.
fn release_static(
    sched: &mut Schedule,
    ins: &Instance,
    i: usize,
    released: &mut Vec<(usize, usize, usize, JobType)>,
) {
    let days = sched.days();
    // Daily caps, chronologically.
    for d in 0..days {
        while sched.daily_hours(i, d) > ins.globals.daily_cap_hours {
            release_latest_in(sched, i, d, d, released);
        }
    }
    // 31-day windows, by window start.
    if days >= 31 {
        for w in 0..=(days - 31) {
            while sched.window_hours(i, w) > ins.globals.monthly_cap_hours {
                release_latest_in(sched, i, w, w + 30, released);
            }
        }
    }
}

/// Releases employee `i`'s latest working hour within days `[d_lo, d_hi]`.
fn release_latest_in(
    sched: &mut Schedule,
    i: usize,
    d_lo: usize,
    d_hi: usize,
    released: &mut Vec<(usize, usize, usize, JobType)>,
) {
    for d in (d_lo..=d_hi.min(sched.days() - 1)).rev() {
        for h in (0..24).rev() {
            if let Assignment::Job(job) = sched.get(i, d, h) {
                sched.set(i, d, h, Assignment::Rest);
                released.push((i, d, h, job));
                return;
            }
        }
    }
}

/// Re-homes released hours day by day, forward.
fn rehome(
    sched: &mut Schedule,
    ins: &Instance,
    mut released: Vec<(usize, usize, usize, JobType)>,
    impaired: &[usize],
) -> RepairReport {
    released.sort_by(|a, b| (a.1, a.2, a.0).cmp(&(b.1, b.2, b.0)));
    let mut report =
        RepairReport { released: released.len(), reassigned: 0, dropped: 0 };

    let mut by_day: Vec<Vec<(usize, usize, JobType)>> = vec![Vec::new(); sched.days()];
    for (emp, d, h, job) in released {
        by_day[d].push((emp, h, job));
    }

    for d in 0..sched.days() {
        if by_day[d].is_empty() {
            continue;
        }
        let mut leftovers: Vec<(usize, usize, JobType)> = Vec::new();

        // Step 1: same-day colleagues vacant in that hour, lowest daily load.
        for &(source, h, job) in &by_day[d] {
            let candidate = (0..sched.m())
                .filter(|&k| {
                    k != source
                        && !impaired.contains(&k)
                        && sched.works_on(k, d)
                        && matches!(sched.get(k, d, h), Assignment::Rest)
                        && can_add_hour(sched, ins, k, d)
                })
                .min_by_key(|&k| (sched.daily_hours(k, d), k));
            match candidate {
                Some(k) => {
                    sched.set(k, d, h, Assignment::Job(job));
                    report.reassigned += 1;
                }
                None => leftovers.push((source, h, job)),
            }
        }

        // Step 2: one employee resting the whole day, lowest horizon load.
        if !leftovers.is_empty() {
            let sources: Vec<usize> = leftovers.iter().map(|&(s, _, _)| s).collect();
            let rested = (0..sched.m())
                .filter(|&k| {
                    !impaired.contains(&k) && !sources.contains(&k) && !sched.works_on(k, d)
                })
                .min_by_key(|&k| (sched.total_hours(k), k));
            if let Some(k) = rested {
                let mut remaining = Vec::new();
                for (source, h, job) in leftovers {
                    if matches!(sched.get(k, d, h), Assignment::Rest)
                        && can_add_hour(sched, ins, k, d)
                    {
                        sched.set(k, d, h, Assignment::Job(job));
                        report.reassigned += 1;
                    } else {
                        remaining.push((source, h, job));
                    }
                }
                leftovers = remaining;
            }
            // Step 3: the rest stays in the queue.
            report.dropped += leftovers.len();
        }
    }
    report
}
