//! The evaluation engine behind [`simulate`](super::simulate).
//!
//! A [`SimContext`] precomputes everything that does not depend on the
//! schedule: the arrival plan with per-request abandonment deadlines, initial
//! emotional states, and the initial-performance table. Evaluating a schedule
//! then walks the horizon hour by hour, processing continuous-time arrival
//! and completion events inside each hour and running the hourly update at
//! each boundary.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::defaults::Defaults;
use crate::instance::Instance;
use crate::nfn::{EmotionAssessor, ImpairmentAssessor, ImpairmentGrade, StressFactors};
use crate::perf::{derive_curve, performance_at, EmotionalState, PerformanceCurve};
use crate::rng;
use crate::schedule::{Assignment, Schedule};
use crate::{Error, Result};

use super::{
    build_arrivals, check_constraints, Arrival, ConstraintViolation, SimOutcome, TraceEvent,
    CANCEL_HISTOGRAM_MINUTES,
};

/// How employee performance enters service times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Full model: hourly factor updates, emotion re-assessment, impairment,
    /// and curve-shaped performance over each stint.
    Emotional,
    /// Performance frozen at each employee's initial curve value `pf(0)`;
    /// no hourly updates, no impairment.
    Frozen,
}

/// Reusable evaluation context for one `(instance, assessors, seed, mode)`.
pub struct SimContext<'a> {
    pub ins: &'a Instance,
    emotion: &'a EmotionAssessor,
    impair: &'a ImpairmentAssessor,
    mode: EvalMode,
    arrivals: Vec<Arrival>,
    /// `m × N × 2` flattened skills.
    skills: Vec<f64>,
    /// `m × N × 2` initial performance values.
    pf0: Vec<f64>,
    initial_emotions: Vec<EmotionalState>,
    initial_norm_factors: Vec<[f64; 19]>,
    initially_impaired: Vec<bool>,
    /// Per job type `(Δτ, wait threshold, weight)`.
    jl_params: Vec<(f64, f64, f64)>,
    divide_mode: bool,
    dispatch_seed: u64,
}

impl<'a> SimContext<'a> {
    pub fn new(
        ins: &'a Instance,
        emotion: &'a EmotionAssessor,
        impair: &'a ImpairmentAssessor,
        seed: u64,
        mode: EvalMode,
    ) -> Result<Self> {
        let n = ins.n_categories();
        let m = ins.m();
        let mut skills = vec![0.0; m * n * 2];
        let mut pf0 = vec![0.0; m * n * 2];
        let mut initial_emotions = Vec::with_capacity(m);
        let mut initial_norm_factors = Vec::with_capacity(m);
        let mut initially_impaired = Vec::with_capacity(m);
        for (i, e) in ins.employees.iter().enumerate() {
            let state = emotion.assess(&e.baseline_emotions, &e.factors);
            initially_impaired.push(impair.assess(&state) == ImpairmentGrade::Severe);
            initial_norm_factors.push(emotion.ranges.normalize_all(&e.factors));
            for j in 0..n {
                for l in 0..2 {
                    let s = e.skills[j][l];
                    skills[(i * n + j) * 2 + l] = s;
                    let curve = derive_curve(s, &state, &ins.globals.curve_baselines[l]);
                    pf0[(i * n + j) * 2 + l] = curve.initial_value();
                }
            }
            initial_emotions.push(state);
        }
        let jl_params: Vec<(f64, f64, f64)> = (0..n)
            .flat_map(|j| {
                (0..2).map(move |l| {
                    let p = ins.job_params[j].class(l);
                    (p.mean_service_time, p.wait_threshold, p.weight)
                })
            })
            .collect();
        Ok(SimContext {
            ins,
            emotion,
            impair,
            mode,
            arrivals: build_arrivals(ins, seed),
            skills,
            pf0,
            initial_emotions,
            initial_norm_factors,
            initially_impaired,
            jl_params,
            divide_mode: Defaults::get().service_time_mode != "multiply",
            dispatch_seed: rng::derive_seed(seed, &[rng::tag("dispatch")]),
        })
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn arrivals(&self) -> &[Arrival] {
        &self.arrivals
    }

    /// Initial performance `pf(0)` of employee `i` on job `(j,l)`.
    pub fn pf0(&self, i: usize, j: usize, l: usize) -> f64 {
        self.pf0[(i * self.ins.n_categories() + j) * 2 + l]
    }

    pub fn initial_emotions(&self) -> &[EmotionalState] {
        &self.initial_emotions
    }

    pub fn evaluate(&self, sched: &Schedule) -> SimOutcome {
        self.try_evaluate(sched).expect("schedule dimensions match instance")
    }

    pub fn try_evaluate(&self, sched: &Schedule) -> Result<SimOutcome> {
        self.run(sched, None)
    }

    pub fn evaluate_traced(&self, sched: &Schedule) -> Result<(SimOutcome, Vec<TraceEvent>)> {
        let mut trace = Vec::new();
        let outcome = self.run(sched, Some(&mut trace))?;
        Ok((outcome, trace))
    }

    fn run(&self, sched: &Schedule, trace: Option<&mut Vec<TraceEvent>>) -> Result<SimOutcome> {
        if sched.m() != self.ins.m() || sched.days() != self.ins.horizon_days() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}×{}", self.ins.m(), self.ins.horizon_days()),
                got: format!("{}×{}", sched.m(), sched.days()),
            });
        }
        let mut run = Run::new(self, sched, trace);
        run.execute();
        Ok(run.finish())
    }
}

const STATUS_WAITING: u8 = 0;
const STATUS_IN_SERVICE: u8 = 1;
const STATUS_SERVED: u8 = 2;
const STATUS_CANCELED: u8 = 3;

struct Req {
    arrival: f64,
    cancel_after: u32,
    jl: u16,
    delayed: bool,
    status: u8,
}

#[derive(PartialEq)]
struct CompletionEv {
    time: f64,
    seq: u64,
    emp: u32,
    req: u32,
}

impl Eq for CompletionEv {}

impl Ord for CompletionEv {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time.total_cmp(&other.time).then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for CompletionEv {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

struct EmpRun {
    emotions: EmotionalState,
    impaired: bool,
    in_flight: bool,
    idle_since: f64,
    stint_start: f64,
    active_until: f64,
    prev_code: u8,
    epoch: u32,
    curve_epoch: u32,
    curve_code: u8,
    curve: PerformanceCurve,
    norm_factors: [f64; 19],
    worked: Vec<u16>,
    hard: Vec<u16>,
    streak_prev: f64,
}

struct Run<'c, 'a> {
    ctx: &'c SimContext<'a>,
    sched: &'c Schedule,
    trace: Option<&'c mut Vec<TraceEvent>>,
    n: usize,
    m: usize,
    days: usize,
    total_hours: usize,
    horizon_end: f64,
    emps: Vec<EmpRun>,
    reqs: Vec<Req>,
    queues: Vec<VecDeque<u32>>,
    heap: BinaryHeap<Reverse<CompletionEv>>,
    heap_seq: u64,
    hour_codes: Vec<u8>,
    dispatch_rng: rand_chacha::ChaCha8Rng,
    arrival_ptr: usize,
    // accounting
    arrived: Vec<u32>,
    delayed: Vec<u32>,
    canceled: Vec<u32>,
    served_by_type: Vec<u64>,
    totals: (u64, u64, u64, u64), // arrived, served, delayed, canceled
    violations: Vec<ConstraintViolation>,
    cancel_hist: Vec<u32>,
    carried: u32,
    curve_derivations: u64,
}

impl<'c, 'a> Run<'c, 'a> {
    fn new(
        ctx: &'c SimContext<'a>,
        sched: &'c Schedule,
        trace: Option<&'c mut Vec<TraceEvent>>,
    ) -> Self {
        use rand::SeedableRng;
        let n = ctx.ins.n_categories();
        let m = ctx.ins.m();
        let days = ctx.ins.horizon_days();
        let total_hours = days * 24;
        let cells = n * 2 * 24 * days;
        let mut violations = check_constraints(ctx.ins, sched);
        let emps = (0..m)
            .map(|i| {
                let impaired =
                    ctx.mode == EvalMode::Emotional && ctx.initially_impaired[i];
                if impaired {
                    violations.push(ConstraintViolation::Impairment {
                        employee: i,
                        day: 0,
                        hour: 0,
                    });
                }
                EmpRun {
                    emotions: ctx.initial_emotions[i],
                    impaired,
                    in_flight: false,
                    idle_since: f64::NEG_INFINITY,
                    stint_start: 0.0,
                    active_until: f64::NEG_INFINITY,
                    prev_code: 0,
                    epoch: 0,
                    curve_epoch: u32::MAX,
                    curve_code: 0,
                    curve: PerformanceCurve::new(0.0, 1.0, 1.0, 1.0, 1.0),
                    norm_factors: ctx.initial_norm_factors[i],
                    worked: vec![0; days],
                    hard: vec![0; days],
                    streak_prev: ctx.ins.employees[i].factors.d_cont,
                }
            })
            .collect();
        Run {
            ctx,
            sched,
            trace,
            n,
            m,
            days,
            total_hours,
            horizon_end: (total_hours * 60) as f64,
            emps,
            reqs: Vec::with_capacity(ctx.arrivals.len()),
            queues: vec![VecDeque::new(); n * 2],
            heap: BinaryHeap::new(),
            heap_seq: 0,
            hour_codes: vec![0; m],
            dispatch_rng: rand_chacha::ChaCha8Rng::seed_from_u64(ctx.dispatch_seed),
            arrival_ptr: 0,
            arrived: vec![0; cells],
            delayed: vec![0; cells],
            canceled: vec![0; cells],
            served_by_type: vec![0; n * 2],
            totals: (0, 0, 0, 0),
            violations,
            cancel_hist: vec![0; CANCEL_HISTOGRAM_MINUTES],
            carried: 0,
            curve_derivations: 0,
        }
    }

    #[inline]
    fn cell(&self, jl: u16, t: f64) -> usize {
        let hour = ((t / 60.0) as usize).min(self.total_hours - 1);
        let (d, h) = (hour / 24, hour % 24);
        ((jl as usize) * 24 + h) * self.days + d
    }

    fn push_trace(&mut self, time: f64, event: &'static str, emp: i64, jl: u16, wait: f64) {
        if let Some(tr) = self.trace.as_deref_mut() {
            tr.push(TraceEvent {
                time_min: time,
                event,
                employee_id: emp,
                category: (jl / 2) as usize,
                class: (jl % 2) as usize,
                wait_min: wait,
            });
        }
    }

    fn execute(&mut self) {
        for hour in 0..self.total_hours {
            let h_start = (hour * 60) as f64;
            let h_end = h_start + 60.0;
            self.drain_completions(h_start, false);
            self.hour_begin(hour, h_start);
            self.event_loop(hour, h_end);
            self.sweep_queues(h_end);
            if self.ctx.mode == EvalMode::Emotional {
                self.hourly_update(hour);
            }
        }
        self.drain_completions(self.horizon_end, false);
        self.finalize_queues();
    }

    /// Processes completion events with `time ≤ cutoff`.
    fn drain_completions(&mut self, cutoff: f64, pickup: bool) {
        while let Some(Reverse(top)) = self.heap.peek() {
            if top.time > cutoff {
                break;
            }
            let Reverse(ev) = self.heap.pop().unwrap();
            self.complete(ev, pickup);
        }
    }

    fn complete(&mut self, ev: CompletionEv, pickup: bool) {
        let req = &mut self.reqs[ev.req as usize];
        debug_assert_eq!(req.status, STATUS_IN_SERVICE);
        req.status = STATUS_SERVED;
        let jl = req.jl;
        self.served_by_type[jl as usize] += 1;
        self.totals.1 += 1;
        let e = &mut self.emps[ev.emp as usize];
        e.in_flight = false;
        e.idle_since = ev.time;
        if ev.time > e.active_until {
            e.active_until = ev.time;
        }
        self.push_trace(ev.time, "service_end", ev.emp as i64, jl, 0.0);
        if pickup {
            self.try_pickup(ev.emp as usize, ev.time);
        }
    }

    /// After finishing a request, an employee takes the next waiting request
    /// of the job type assigned in the current hour.
    fn try_pickup(&mut self, emp: usize, now: f64) {
        let hour = ((now / 60.0) as usize).min(self.total_hours - 1);
        let e = &self.emps[emp];
        if e.impaired || e.in_flight {
            return;
        }
        let (d, h) = (hour / 24, hour % 24);
        if let Assignment::Job(job) = self.sched.get(emp, d, h) {
            let jl = (job.category * 2 + job.class) as u16;
            if let Some(req) = self.pop_viable(jl, now) {
                self.serve(req, emp, now);
            }
        }
    }

    /// Pops the queue head of `jl`, discarding requests that abandoned before
    /// `now` (their cancellation minute passed while they waited).
    fn pop_viable(&mut self, jl: u16, now: f64) -> Option<u32> {
        loop {
            let head = *self.queues[jl as usize].front()?;
            let r = &self.reqs[head as usize];
            let cancel_time = r.arrival + r.cancel_after as f64;
            if cancel_time <= now {
                self.queues[jl as usize].pop_front();
                self.cancel_by_draw(head);
            } else {
                self.queues[jl as usize].pop_front();
                return Some(head);
            }
        }
    }

    fn cancel_by_draw(&mut self, req_idx: u32) {
        let (jl, arrival, cancel_after, was_delayed) = {
            let r = &self.reqs[req_idx as usize];
            (r.jl, r.arrival, r.cancel_after, r.delayed)
        };
        let cancel_time = arrival + cancel_after as f64;
        let threshold = self.ctx.jl_params[jl as usize].1;
        if !was_delayed {
            self.mark_delayed(req_idx, (arrival + threshold).min(cancel_time));
        }
        let cell = self.cell(jl, cancel_time);
        self.canceled[cell] += 1;
        self.totals.3 += 1;
        self.cancel_hist[(cancel_after as usize).min(CANCEL_HISTOGRAM_MINUTES - 1)] += 1;
        self.reqs[req_idx as usize].status = STATUS_CANCELED;
        self.push_trace(cancel_time, "canceled", -1, jl, cancel_after as f64);
    }

    fn mark_delayed(&mut self, req_idx: u32, at: f64) {
        let r = &mut self.reqs[req_idx as usize];
        if r.delayed {
            return;
        }
        r.delayed = true;
        let jl = r.jl;
        let arrival = r.arrival;
        let cell = self.cell(jl, at);
        self.delayed[cell] += 1;
        self.totals.2 += 1;
        self.push_trace(at, "delayed", -1, jl, at - arrival);
    }

    fn hour_begin(&mut self, hour: usize, h_start: f64) {
        let (d, h) = (hour / 24, hour % 24);
        let h_end = h_start + 60.0;
        for i in 0..self.m {
            let code = match self.sched.get(i, d, h) {
                Assignment::Rest => 0u8,
                Assignment::Job(job) => 1 + (job.category * 2 + job.class) as u8,
            };
            let e = &mut self.emps[i];
            if e.impaired {
                self.hour_codes[i] = 0;
                e.prev_code = 0;
                continue;
            }
            self.hour_codes[i] = code;
            if code != 0 {
                // A full hour or more off duty starts a fresh stint.
                if h_start - e.active_until >= 60.0 {
                    e.stint_start = h_start;
                }
                if code != e.prev_code && !e.in_flight {
                    e.idle_since = h_start;
                }
                if h_end > e.active_until {
                    e.active_until = h_end;
                }
            }
            e.prev_code = code;
        }
        // Newly available employees pick up whatever is already waiting.
        for jl in 0..(self.n * 2) as u16 {
            self.dispatch_queue(jl, h_start);
        }
    }

    /// Serves queued requests of `jl` while an eligible idle employee exists.
    fn dispatch_queue(&mut self, jl: u16, now: f64) {
        while !self.queues[jl as usize].is_empty() {
            let Some(emp) = self.pick_longest_idle(jl) else { return };
            match self.pop_viable(jl, now) {
                Some(req) => self.serve(req, emp, now),
                None => return,
            }
        }
    }

    /// The eligible idle employee with maximum idle time; ties broken by a
    /// dedicated random stream.
    fn pick_longest_idle(&mut self, jl: u16) -> Option<usize> {
        use rand::Rng;
        let code = 1 + jl as u8;
        let mut best: Option<(f64, usize)> = None;
        let mut ties = 0usize;
        for i in 0..self.m {
            if self.hour_codes[i] != code {
                continue;
            }
            let e = &self.emps[i];
            if e.in_flight || e.impaired {
                continue;
            }
            match best {
                None => {
                    best = Some((e.idle_since, i));
                    ties = 1;
                }
                Some((bt, _)) if e.idle_since < bt => {
                    best = Some((e.idle_since, i));
                    ties = 1;
                }
                Some((bt, _)) if e.idle_since == bt => {
                    ties += 1;
                    // Reservoir draw keeps one uniform choice among ties.
                    if self.dispatch_rng.random_range(0..ties) == 0 {
                        best = Some((bt, i));
                    }
                }
                _ => {}
            }
        }
        best.map(|(_, i)| i)
    }

    fn serve(&mut self, req_idx: u32, emp: usize, now: f64) {
        let (jl, arrival) = {
            let r = &self.reqs[req_idx as usize];
            (r.jl, r.arrival)
        };
        let (delta_tau, threshold, _) = self.ctx.jl_params[jl as usize];
        let wait = now - arrival;
        if wait > threshold {
            self.mark_delayed(req_idx, arrival + threshold);
        }
        let pf = match self.ctx.mode {
            EvalMode::Frozen => {
                self.ctx.pf0[(emp * self.n) * 2 + jl as usize]
            }
            EvalMode::Emotional => {
                let code = 1 + jl as u8;
                let e = &self.emps[emp];
                if e.curve_epoch != e.epoch || e.curve_code != code {
                    let skill = self.ctx.skills[(emp * self.n) * 2 + jl as usize];
                    let class = (jl % 2) as usize;
                    let curve = derive_curve(
                        skill,
                        &self.emps[emp].emotions,
                        &self.ctx.ins.globals.curve_baselines[class],
                    );
                    self.curve_derivations += 1;
                    let e = &mut self.emps[emp];
                    e.curve = curve;
                    e.curve_epoch = e.epoch;
                    e.curve_code = code;
                }
                let e = &self.emps[emp];
                performance_at(&e.curve, (now - e.stint_start).max(0.0))
            }
        };
        let mut dur = if self.ctx.divide_mode { delta_tau / pf } else { delta_tau * pf };
        if !dur.is_finite() || dur > 10.0 * delta_tau {
            dur = 10.0 * delta_tau;
        }
        let finish = now + dur;
        {
            let r = &mut self.reqs[req_idx as usize];
            r.status = STATUS_IN_SERVICE;
        }
        let e = &mut self.emps[emp];
        e.in_flight = true;
        if finish > e.active_until {
            e.active_until = finish;
        }
        self.heap_seq += 1;
        self.heap.push(Reverse(CompletionEv {
            time: finish,
            seq: self.heap_seq,
            emp: emp as u32,
            req: req_idx,
        }));
        self.push_trace(now, "service_start", emp as i64, jl, wait);
    }

    fn event_loop(&mut self, hour: usize, h_end: f64) {
        loop {
            let next_completion = self.heap.peek().map(|Reverse(e)| e.time);
            let next_arrival = self
                .ctx
                .arrivals
                .get(self.arrival_ptr)
                .map(|a| a.time)
                .filter(|&t| t < h_end);
            match (next_completion, next_arrival) {
                (Some(ct), _) if ct < h_end && next_arrival.map_or(true, |at| ct <= at) => {
                    let Reverse(ev) = self.heap.pop().unwrap();
                    self.complete(ev, true);
                }
                (_, Some(_)) => {
                    let arrival = self.ctx.arrivals[self.arrival_ptr];
                    self.arrival_ptr += 1;
                    self.handle_arrival(hour, arrival);
                }
                _ => break,
            }
        }
    }

    fn handle_arrival(&mut self, _hour: usize, a: Arrival) {
        let jl = a.category * 2 + a.class as u16;
        let req_idx = self.reqs.len() as u32;
        self.reqs.push(Req {
            arrival: a.time,
            cancel_after: a.cancel_after,
            jl,
            delayed: false,
            status: STATUS_WAITING,
        });
        let cell = self.cell(jl, a.time);
        self.arrived[cell] += 1;
        self.totals.0 += 1;
        self.push_trace(a.time, "arrival", -1, jl, 0.0);
        if let Some(emp) = self.pick_longest_idle(jl) {
            self.serve(req_idx, emp, a.time);
        } else {
            self.queues[jl as usize].push_back(req_idx);
        }
    }

    /// Removes requests whose abandonment minute fell inside the hour and
    /// marks threshold crossings that occurred while waiting.
    fn sweep_queues(&mut self, h_end: f64) {
        for jl in 0..(self.n * 2) as u16 {
            let threshold = self.ctx.jl_params[jl as usize].1;
            let mut retained: VecDeque<u32> = VecDeque::new();
            while let Some(req_idx) = self.queues[jl as usize].pop_front() {
                let (arrival, cancel_after, delayed) = {
                    let r = &self.reqs[req_idx as usize];
                    (r.arrival, r.cancel_after, r.delayed)
                };
                let cancel_time = arrival + cancel_after as f64;
                if cancel_time < h_end {
                    self.cancel_by_draw(req_idx);
                } else {
                    if !delayed && arrival + threshold < h_end {
                        self.mark_delayed(req_idx, arrival + threshold);
                    }
                    retained.push_back(req_idx);
                }
            }
            self.queues[jl as usize] = retained;
        }
    }

    /// End-of-hour bookkeeping for the emotional model: working-time factors,
    /// emotion re-assessment, impairment grading.
    fn hourly_update(&mut self, hour: usize) {
        let (d, h) = (hour / 24, hour % 24);
        for i in 0..self.m {
            if self.emps[i].impaired {
                continue;
            }
            let worked_this_hour = self.hour_codes[i] != 0;
            if worked_this_hour {
                let e = &mut self.emps[i];
                e.worked[d] += 1;
                if (self.hour_codes[i] - 1) % 2 == 1 {
                    e.hard[d] += 1;
                }
            }
            let factors = self.current_factors(i, d);
            let norm = self.ctx.emotion.ranges.normalize_all(&factors);
            let changed = norm != self.emps[i].norm_factors;
            if changed {
                let profile = &self.ctx.ins.employees[i];
                let state = self.ctx.emotion.assess(&profile.baseline_emotions, &factors);
                let e = &mut self.emps[i];
                e.norm_factors = norm;
                if state != e.emotions {
                    e.emotions = state;
                    e.epoch += 1;
                }
                if self.ctx.impair.assess(&state) == ImpairmentGrade::Severe {
                    let e = &mut self.emps[i];
                    e.impaired = true;
                    self.violations.push(ConstraintViolation::Impairment {
                        employee: i,
                        day: d,
                        hour: h,
                    });
                }
            }
            if h == 23 {
                let e = &mut self.emps[i];
                e.streak_prev = if e.worked[d] > 0 { e.streak_prev + 1.0 } else { 0.0 };
            }
        }
    }

    /// Reconstructs the factor vector of employee `i` at the end of an hour
    /// of day `d`. Pre-horizon history contributes its initial value scaled
    /// by the unexpired share of each rolling window.
    fn current_factors(&self, i: usize, d: usize) -> StressFactors {
        let e = &self.emps[i];
        let init = &self.ctx.ins.employees[i].factors;
        let pre = |window: usize| (window.saturating_sub(d + 1)) as f64 / window as f64;

        let sum_hours = |buf: &[u16], window: usize| -> f64 {
            let start = (d + 1).saturating_sub(window);
            buf[start..=d].iter().map(|&x| x as f64).sum()
        };
        let sum_days = |buf: &[u16], window: usize| -> f64 {
            let start = (d + 1).saturating_sub(window);
            buf[start..=d].iter().filter(|&&x| x > 0).count() as f64
        };

        let today_init = if d == 0 { init.t_day } else { 0.0 };
        let today_hard_init = if d == 0 { init.t_day_hard } else { 0.0 };
        let mut f = *init;
        f.t_day = today_init + e.worked[d] as f64;
        f.t_day_hard = today_hard_init + e.hard[d] as f64;
        f.t_week = init.t_week * pre(7) + sum_hours(&e.worked, 7);
        f.t_week_hard = init.t_week_hard * pre(7) + sum_hours(&e.hard, 7);
        f.t_month = init.t_month * pre(30) + sum_hours(&e.worked, 30);
        f.t_month_hard = init.t_month_hard * pre(30) + sum_hours(&e.hard, 30);
        f.t_season = init.t_season * pre(90) + sum_hours(&e.worked, 90);
        f.t_season_hard = init.t_season_hard * pre(90) + sum_hours(&e.hard, 90);
        f.d_cont = e.streak_prev + if e.worked[d] > 0 { 1.0 } else { 0.0 };
        f.d_month = init.d_month * pre(30) + sum_days(&e.worked, 30);
        f.d_season = init.d_season * pre(90) + sum_days(&e.worked, 90);
        // Keep the ordering invariants under mixed decay.
        f.d_month = f.d_month.max(f.d_cont);
        f.d_season = f.d_season.max(f.d_month);
        f
    }

    /// Converts what is left in the queues at horizon end.
    fn finalize_queues(&mut self) {
        let end = self.horizon_end;
        for jl in 0..(self.n * 2) as u16 {
            let threshold = self.ctx.jl_params[jl as usize].1;
            while let Some(req_idx) = self.queues[jl as usize].pop_front() {
                let (arrival, cancel_after, delayed) = {
                    let r = &self.reqs[req_idx as usize];
                    (r.arrival, r.cancel_after, r.delayed)
                };
                debug_assert!(arrival + (cancel_after as f64) >= end);
                self.carried += 1;
                if !delayed {
                    self.mark_delayed(req_idx, (arrival + threshold).min(end - 1e-9));
                }
                let cell = self.cell(jl, end - 1e-9);
                self.canceled[cell] += 1;
                self.totals.3 += 1;
                self.reqs[req_idx as usize].status = STATUS_CANCELED;
                self.push_trace(end, "canceled", -1, jl, end - arrival);
            }
        }
    }

    fn finish(self) -> SimOutcome {
        let in_service_at_end =
            self.reqs.iter().filter(|r| r.status == STATUS_IN_SERVICE).count() as u32;
        debug_assert_eq!(
            self.totals.0,
            self.totals.1 + self.totals.3 + in_service_at_end as u64
        );
        let mut f_delay = 0.0;
        let mut f_cancel = 0.0;
        let days = self.days;
        for jl in 0..self.n * 2 {
            let weight = self.ctx.jl_params[jl].2;
            let base = jl * 24 * days;
            let d_sum: u64 =
                self.delayed[base..base + 24 * days].iter().map(|&x| x as u64).sum();
            let c_sum: u64 =
                self.canceled[base..base + 24 * days].iter().map(|&x| x as u64).sum();
            f_delay += weight * d_sum as f64;
            f_cancel += weight * c_sum as f64;
        }
        let f = f_delay + self.ctx.ins.globals.cancel_weight * f_cancel;
        SimOutcome {
            n_categories: self.n,
            horizon_days: days,
            arrived: self.arrived,
            delayed: self.delayed,
            canceled: self.canceled,
            served_by_type: self.served_by_type,
            f_delay,
            f_cancel,
            f,
            violations: self.violations,
            carried_queue_size: self.carried,
            in_service_at_end,
            total_arrived: self.totals.0,
            total_served: self.totals.1,
            total_delayed: self.totals.2,
            total_canceled: self.totals.3,
            cancel_wait_histogram: self.cancel_hist,
            curve_derivations: self.curve_derivations,
        }
    }
}
