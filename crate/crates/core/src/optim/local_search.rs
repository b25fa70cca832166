//! Neighborhood moves over one day's short-term schedule.
//!
//! * LS1 — reassign a working hour to an employee resting in that hour;
//! * LS2 — swap two employees' differing job types within one hour;
//! * LS3 — move a working hour earlier, when the earlier hour's expected
//!   unserved load is at least half of what the employee could process there;
//! * LS4 — move a working hour later under the same load condition, provided
//!   the origin hour would keep at most a small unserved remainder.
//!
//! Every move preserves static feasibility by construction: LS2–LS4 keep each
//! employee's daily hour count, LS1 checks the recipient's caps.

use rand::Rng;

use crate::instance::{Instance, JobType};
use crate::perf::{derive_curve, performance_at};
use crate::schedule::{Assignment, Schedule};
use crate::sim::{EvalMode, SimContext};

use super::can_add_hour;
use super::init::shuffle;

pub const LS_OPERATOR_NAMES: [&str; 4] = ["reassign", "swap-jobs", "move-earlier", "move-later"];

/// Maximum unserved load allowed to remain in the origin hour after LS4.
pub const LS4_ORIGIN_REMAINDER: f64 = 15.0;

#[derive(Debug, Clone, PartialEq)]
pub enum LsMove {
    /// LS1: hand the hour `h` of day `d` from `from` to `to`.
    Reassign { from: usize, to: usize, d: usize, h: usize, job: JobType },
    /// LS2: swap differing jobs of `a` and `b` in hour `h`.
    SwapJobs { a: usize, b: usize, d: usize, h: usize, job_a: JobType, job_b: JobType },
    /// LS3/LS4: move employee `i`'s hour from `from_h` to `to_h`.
    MoveHour { i: usize, d: usize, from_h: usize, to_h: usize, job: JobType, earlier: bool },
}

impl LsMove {
    /// Operator index 0–3 (LS1–LS4).
    pub fn operator(&self) -> usize {
        match self {
            LsMove::Reassign { .. } => 0,
            LsMove::SwapJobs { .. } => 1,
            LsMove::MoveHour { earlier: true, .. } => 2,
            LsMove::MoveHour { earlier: false, .. } => 3,
        }
    }
}

/// Cells to restore, in application order.
pub struct UndoInfo(Vec<(usize, usize, usize, Assignment)>);

pub fn apply(sched: &mut Schedule, mv: &LsMove) -> UndoInfo {
    let mut undo = Vec::with_capacity(2);
    let mut set = |sched: &mut Schedule, i: usize, d: usize, h: usize, a: Assignment| {
        undo.push((i, d, h, sched.get(i, d, h)));
        sched.set(i, d, h, a);
    };
    match *mv {
        LsMove::Reassign { from, to, d, h, job } => {
            set(sched, from, d, h, Assignment::Rest);
            set(sched, to, d, h, Assignment::Job(job));
        }
        LsMove::SwapJobs { a, b, d, h, job_a, job_b } => {
            set(sched, a, d, h, Assignment::Job(job_b));
            set(sched, b, d, h, Assignment::Job(job_a));
        }
        LsMove::MoveHour { i, d, from_h, to_h, job, .. } => {
            set(sched, i, d, from_h, Assignment::Rest);
            set(sched, i, d, to_h, Assignment::Job(job));
        }
    }
    UndoInfo(undo)
}

pub fn undo(sched: &mut Schedule, undo: UndoInfo) {
    for (i, d, h, a) in undo.0.into_iter().rev() {
        sched.set(i, d, h, a);
    }
}

/// Draws one candidate move of operator `op` (0–3) on day `d`, or `None`
/// when the operator has no legal move at the sampled spot.
pub fn generate_move(
    sched: &Schedule,
    ctx: &SimContext,
    op: usize,
    d: usize,
    rng: &mut impl Rng,
) -> Option<LsMove> {
    match op {
        0 => gen_reassign(sched, ctx.ins, d, rng),
        1 => gen_swap_jobs(sched, d, rng),
        2 => gen_move_hour(sched, ctx, d, true, rng),
        _ => gen_move_hour(sched, ctx, d, false, rng),
    }
}

/// A uniformly sampled working cell `(employee, hour, job)` of day `d`.
fn random_working_cell(
    sched: &Schedule,
    d: usize,
    rng: &mut impl Rng,
) -> Option<(usize, usize, JobType)> {
    let workers: Vec<usize> = (0..sched.m()).filter(|&i| sched.works_on(i, d)).collect();
    if workers.is_empty() {
        return None;
    }
    let i = workers[rng.random_range(0..workers.len())];
    let cells = sched.day_assignments(i, d);
    let (h, job) = cells[rng.random_range(0..cells.len())];
    Some((i, h, job))
}

fn gen_reassign(
    sched: &Schedule,
    ins: &Instance,
    d: usize,
    rng: &mut impl Rng,
) -> Option<LsMove> {
    let (from, h, job) = random_working_cell(sched, d, rng)?;
    let mut candidates: Vec<usize> = (0..sched.m())
        .filter(|&k| {
            k != from
                && matches!(sched.get(k, d, h), Assignment::Rest)
                && can_add_hour(sched, ins, k, d)
        })
        .collect();
    if candidates.is_empty() {
        return None;
    }
    shuffle(&mut candidates, rng);
    Some(LsMove::Reassign { from, to: candidates[0], d, h, job })
}

fn gen_swap_jobs(sched: &Schedule, d: usize, rng: &mut impl Rng) -> Option<LsMove> {
    let mut hours: Vec<usize> = (0..24).collect();
    shuffle(&mut hours, rng);
    for h in hours {
        let mut workers: Vec<(usize, JobType)> = (0..sched.m())
            .filter_map(|i| match sched.get(i, d, h) {
                Assignment::Job(job) => Some((i, job)),
                Assignment::Rest => None,
            })
            .collect();
        if workers.len() < 2 {
            continue;
        }
        shuffle(&mut workers, rng);
        let (a, job_a) = workers[0];
        if let Some(&(b, job_b)) = workers[1..].iter().find(|(_, jb)| *jb != job_a) {
            return Some(LsMove::SwapJobs { a, b, d, h, job_a, job_b });
        }
    }
    None
}

fn gen_move_hour(
    sched: &Schedule,
    ctx: &SimContext,
    d: usize,
    earlier: bool,
    rng: &mut impl Rng,
) -> Option<LsMove> {

    let (i, h, job) = random_working_cell(sched, d, rng)?;
    let capacity = hourly_capacity(sched, ctx, i, job, d, h);
    let mut targets: Vec<usize> = (0..24)
        .filter(|&t| {
            let direction_ok = if earlier { t < h } else { t > h };
            direction_ok && matches!(sched.get(i, d, t), Assignment::Rest)
        })
        .collect();
    shuffle(&mut targets, rng);
    for t in targets {
        if unserved_estimate(sched, ctx, job, t, d, None) < capacity / 2.0 {
            continue;
        }
        if !earlier {
            // The origin hour must not be left with too much unserved work.
            let origin_after = unserved_estimate(sched, ctx, job, h, d, Some(i));
            if origin_after > LS4_ORIGIN_REMAINDER {
                continue;
            }
        }
        return Some(LsMove::MoveHour { i, d, from_h: h, to_h: t, job, earlier });
    }
    None
}

/// Requests employee `i` could process in hour `h`: `60·pf/Δτ`, with `pf`
/// taken at the midpoint of the hour given the pre-move scheduled stint (or
/// the frozen initial performance in frozen mode).
fn hourly_capacity(
    sched: &Schedule,
    ctx: &SimContext,
    i: usize,
    job: JobType,
    d: usize,
    h: usize,
) -> f64 {
    let delta_tau = ctx.ins.job_params[job.category].class(job.class).mean_service_time;
    let pf = match ctx.mode() {
        EvalMode::Frozen => ctx.pf0(i, job.category, job.class),
        EvalMode::Emotional => {
            // Scheduled stint: contiguous working hours immediately before h.
            let mut start = h;
            while start > 0 && sched.is_working(i, d, start - 1) {
                start -= 1;
            }
            let t_mid = (h - start) as f64 * 60.0 + 30.0;
            let curve = derive_curve(
                ctx.ins.employees[i].skills[job.category][job.class],
                &ctx.initial_emotions()[i],
                &ctx.ins.globals.curve_baselines[job.class],
            );
            performance_at(&curve, t_mid)
        }
    };
    60.0 * pf / delta_tau
}

/// Expected unserved requests of `job` in hour `h` of day `d`: arrivals minus
/// the frozen-performance capacity of the employees assigned there,
/// optionally excluding one employee.
fn unserved_estimate(
    sched: &Schedule,
    ctx: &SimContext,
    job: JobType,
    h: usize,
    d: usize,
    exclude: Option<usize>,
) -> f64 {
    let ins = ctx.ins;
    let rate = ins.rate(job.category, job.class, h, d);
    let delta_tau = ins.job_params[job.category].class(job.class).mean_service_time;
    let mut supply = 0.0;
    for k in 0..sched.m() {
        if exclude == Some(k) {
            continue;
        }
        if sched.get(k, d, h) == Assignment::Job(job) {
            supply += 60.0 * ctx.pf0(k, job.category, job.class) / delta_tau;
        }
    }
    (rate - supply).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{desk_spec, generate};
    use crate::nfn::{EmotionAssessor, ImpairmentAssessor};

    fn setup() -> (crate::instance::Instance, EmotionAssessor, ImpairmentAssessor) {
        (
            generate(&desk_spec(3)).unwrap(),
            EmotionAssessor::init_random(2, 1),
            ImpairmentAssessor::init_random(2, 2),
        )
    }

    #[test]
    fn apply_undo_round_trip() {
        let (ins, em, im) = setup();
        let ctx = SimContext::new(&ins, &em, &im, 5, EvalMode::Frozen).unwrap();
        let sched = crate::sim::tests::naive_schedule(&ins, 9..17);
        let mut rng = crate::rng::stream(17, &[0]);
        let mut work = sched.clone();
        let mut generated = 0;
        for op in 0..4 {
            for d in 0..ins.horizon_days() {
                for _ in 0..5 {
                    if let Some(mv) = generate_move(&work, &ctx, op, d, &mut rng) {
                        generated += 1;
                        let undo_info = apply(&mut work, &mv);
                        assert_ne!(work, sched, "{mv:?} must change the schedule");
                        undo(&mut work, undo_info);
                        assert_eq!(work, sched);
                    }
                }
            }
        }
        assert!(generated > 20, "only {generated} moves generated");
    }

    #[test]
    fn swap_preserves_daily_hours() {
        let (ins, em, im) = setup();
        let ctx = SimContext::new(&ins, &em, &im, 5, EvalMode::Frozen).unwrap();
        let mut sched = crate::sim::tests::naive_schedule(&ins, 9..17);
        let mut rng = crate::rng::stream(23, &[0]);
        let mv = (0..200)
            .find_map(|_| generate_move(&sched, &ctx, 1, 2, &mut rng))
            .expect("a swap exists");
        let LsMove::SwapJobs { a, b, d, .. } = mv else { panic!("wrong operator") };
        let before = (sched.daily_hours(a, d), sched.daily_hours(b, d));
        apply(&mut sched, &mv);
        assert_eq!((sched.daily_hours(a, d), sched.daily_hours(b, d)), before);
        let LsMove::SwapJobs { job_a, job_b, h, .. } = mv else { unreachable!() };
        assert_eq!(sched.get(a, d, h), Assignment::Job(job_b));
        assert_eq!(sched.get(b, d, h), Assignment::Job(job_a));
    }

    #[test]
    fn moves_preserve_static_feasibility() {
        let (ins, em, im) = setup();
        let ctx = SimContext::new(&ins, &em, &im, 5, EvalMode::Emotional).unwrap();
        let mut sched = crate::sim::tests::naive_schedule(&ins, 9..17);
        let mut rng = crate::rng::stream(29, &[0]);
        assert!(crate::sim::check_constraints(&ins, &sched).is_empty());
        for step in 0..300 {
            let op = step % 4;
            let d = (step / 4) % ins.horizon_days();
            if let Some(mv) = generate_move(&sched, &ctx, op, d, &mut rng) {
                apply(&mut sched, &mv);
                assert!(
                    crate::sim::check_constraints(&ins, &sched).is_empty(),
                    "{mv:?} broke feasibility"
                );
            }
        }
    }

    #[test]
    fn move_hour_respects_direction() {
        let (ins, em, im) = setup();
        let ctx = SimContext::new(&ins, &em, &im, 5, EvalMode::Frozen).unwrap();
        let sched = crate::sim::tests::naive_schedule(&ins, 9..17);
        let mut rng = crate::rng::stream(31, &[0]);
        let mut seen = [false; 2];
        for _ in 0..500 {
            if let Some(LsMove::MoveHour { from_h, to_h, earlier, .. }) =
                generate_move(&sched, &ctx, 2, 3, &mut rng)
            {
                assert!(earlier && to_h < from_h);
                seen[0] = true;
            }
            if let Some(LsMove::MoveHour { from_h, to_h, earlier, .. }) =
                generate_move(&sched, &ctx, 3, 3, &mut rng)
            {
                assert!(!earlier && to_h > from_h);
                seen[1] = true;
            }
        }
        assert!(seen[0] || seen[1], "no hour moves generated at all");
    }
}
