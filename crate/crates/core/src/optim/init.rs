//! Solution initialization.
//!
//! For each day and each job type in non-increasing importance order: size
//! the staffing from the expected workload, draw the actual head count from a
//! Gaussian around it, select employees in two performance tiers, then spread
//! the hours so no selected employee carries more than twice the load of
//! another.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::instance::JobType;
use crate::schedule::{Assignment, Schedule};
use crate::sim::SimContext;

use super::can_add_hour;

/// Expected staffing for a workload of `tau_hours` employee-hours at
/// `avg_daily_hours` per employee.
pub fn base_staffing(tau_hours: f64, avg_daily_hours: f64) -> f64 {
    tau_hours / avg_daily_hours
}

/// Builds one schedule. Deterministic in `seed`.
pub fn init_solution(ctx: &SimContext, seed: u64) -> Schedule {
    let ins = ctx.ins;
    let mut rng = crate::rng::stream(seed, &[crate::rng::tag("init-solution")]);
    let m = ins.m();
    let days = ins.horizon_days();
    let avg_daily = ins.globals.avg_daily_hours;
    let mut sched = Schedule::rest(m, days);

    // Job types in non-increasing importance weight, ties by index.
    let mut job_order: Vec<JobType> = (0..ins.n_categories())
        .flat_map(|j| (0..2).map(move |l| JobType { category: j, class: l }))
        .collect();
    job_order.sort_by(|a, b| {
        let wa = ins.job_params[a.category].class(a.class).weight;
        let wb = ins.job_params[b.category].class(b.class).weight;
        wb.total_cmp(&wa).then(a.category.cmp(&b.category)).then(a.class.cmp(&b.class))
    });

    let mut scratch: Vec<usize> = Vec::with_capacity(m);
    for d in 0..days {
        for job in &job_order {
            let (j, l) = (job.category, job.class);
            let params = ins.job_params[j].class(l);
            let expected = ins.expected_daily_arrivals(j, l, d);
            let tau_hours = expected * params.mean_service_time / 60.0;
            if tau_hours <= 0.0 {
                continue;
            }
            let m_bar = base_staffing(tau_hours, avg_daily);
            let draw = Normal::new(m_bar, m_bar.sqrt() / 2.0).unwrap().sample(&mut rng);
            let count = (draw.round() as i64).clamp(1, m as i64) as usize;
            // Per-employee share of this job's hours, for the room checks.
            let share = (tau_hours / count as f64).ceil().max(1.0) as u32;

            // Tier 1: capable employees with room under the daily norm.
            scratch.clear();
            scratch.extend((0..m).filter(|&i| {
                ctx.pf0(i, j, l) > 0.5
                    && (sched.daily_hours(i, d) + share) as f64 <= avg_daily
            }));
            shuffle(&mut scratch, &mut rng);
            let mut selected: Vec<usize> = scratch.iter().copied().take(count).collect();
            if selected.len() < count {
                // Tier 2: lower performance, any room under the hard caps.
                scratch.clear();
                scratch.extend((0..m).filter(|&i| {
                    !selected.contains(&i)
                        && ctx.pf0(i, j, l) > 0.25
                        && can_add_hour(&sched, ins, i, d)
                }));
                shuffle(&mut scratch, &mut rng);
                let missing = count - selected.len();
                selected.extend(scratch.iter().copied().take(missing));
            }
            if selected.is_empty() {
                continue; // jobs stay unprocessed
            }

            assign_day_hours(&mut sched, ctx, *job, d, tau_hours, &selected, &mut rng);
        }
    }
    sched
}

/// Spreads `tau_hours` of a job across the selected employees on day `d`,
/// placing each employee's quota at random active hours, then rebalances
/// until the max/min assigned-hours ratio is at most 2.
pub fn assign_day_hours(
    sched: &mut Schedule,
    ctx: &SimContext,
    job: JobType,
    d: usize,
    tau_hours: f64,
    selected: &[usize],
    rng: &mut impl Rng,
) {
    let ins = ctx.ins;
    let total = (tau_hours.round() as u64).max(1) as usize;
    let k = selected.len();
    let base = total / k;
    let extra = total % k;

    let active: Vec<usize> =
        (0..24).filter(|&h| ins.rate(job.category, job.class, h, d) > 0.0).collect();
    if active.is_empty() {
        return;
    }

    let mut placed: Vec<(usize, u32)> = Vec::with_capacity(k);
    for (slot, &i) in selected.iter().enumerate() {
        let quota = base + usize::from(slot < extra);
        let mut hours = active.clone();
        shuffle(&mut hours, rng);
        let mut got = 0u32;
        for &h in &hours {
            if got as usize >= quota {
                break;
            }
            if matches!(sched.get(i, d, h), Assignment::Rest) && can_add_hour(sched, ins, i, d)
            {
                sched.set(i, d, h, Assignment::Job(job));
                got += 1;
            }
        }
        placed.push((i, got));
    }

    // Rebalance: move one hour from the most-loaded to the least-loaded
    // until the ratio holds or loads are uniform.
    for _ in 0..total {
        placed.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        let (min_emp, min_hours) = placed[0];
        let (max_emp, max_hours) = *placed.last().unwrap();
        if max_hours <= 1 || (min_hours > 0 && max_hours <= 2 * min_hours) {
            break;
        }
        // Take the max employee's latest hour of this job.
        let Some((h_from, _)) = sched
            .day_assignments(max_emp, d)
            .into_iter()
            .rev()
            .find(|(_, jb)| *jb == job)
        else {
            break;
        };
        let mut free: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&h| matches!(sched.get(min_emp, d, h), Assignment::Rest))
            .collect();
        if free.is_empty() || !can_add_hour(sched, ins, min_emp, d) {
            break;
        }
        shuffle(&mut free, rng);
        sched.set(max_emp, d, h_from, Assignment::Rest);
        sched.set(min_emp, d, free[0], Assignment::Job(job));
        for p in placed.iter_mut() {
            if p.0 == max_emp {
                p.1 -= 1;
            }
            if p.0 == min_emp {
                p.1 += 1;
            }
        }
    }
}

/// Fisher–Yates with the caller's stream.
pub(crate) fn shuffle<T>(v: &mut [T], rng: &mut impl Rng) {
    for i in (1..v.len()).rev() {
        let k = rng.random_range(0..=i);
        v.swap(i, k);
    }
}
