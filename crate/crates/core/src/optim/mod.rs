//! The memetic optimizer: solution initialization, wavelength-controlled
//! global mutation over long-term schedules, operator-selected neighborhood
//! search over short-term schedules, constraint repair, and a quadratic
//! population-size reduction schedule.

pub mod init;
pub mod local_search;
pub mod mutation;
pub mod repair;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults::Defaults;
use crate::dqn::{self, QNetwork, ReplayBuffer, SearchState, Transition};
use crate::instance::Instance;
use crate::nfn::{EmotionAssessor, ImpairmentAssessor};
use crate::rng;
use crate::schedule::Schedule;
use crate::sim::{check_constraints, EvalMode, SimContext, SimOutcome};
use crate::{Error, Result};

pub use local_search::{LsMove, LS_OPERATOR_NAMES};

/// Control parameters of one optimizer run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RunConfig {
    pub pop_max: usize,
    pub pop_min: usize,
    pub ns_min: usize,
    pub ns_max: usize,
    /// Wavelength reduction coefficient, > 1.
    pub alpha: f64,
    pub lambda_init: f64,
    /// Total simulator-call budget for the run.
    pub eval_budget: u64,
    /// DQN discount factor.
    pub gamma: f64,
    pub seed: u64,
}

impl RunConfig {
    /// Defaults with the standard budget of `600·m` evaluations.
    pub fn for_instance(ins: &Instance, seed: u64) -> Self {
        let d = Defaults::get().optimizer;
        RunConfig {
            pop_max: d.pop_max,
            pop_min: d.pop_min,
            ns_min: d.ns_min,
            ns_max: d.ns_max,
            alpha: d.alpha,
            lambda_init: d.lambda_init,
            eval_budget: d.evals_per_employee * ins.m() as u64,
            gamma: d.gamma,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.pop_min < 1 || self.pop_min > self.pop_max {
            return bad("population bounds must satisfy 1 ≤ pop_min ≤ pop_max");
        }
        if self.ns_min > self.ns_max {
            return bad("neighborhood bounds must satisfy ns_min ≤ ns_max");
        }
        if !(self.alpha > 1.0) {
            return bad("alpha must exceed 1");
        }
        if !(self.lambda_init > 0.0 && self.lambda_init <= 0.5) {
            return bad("lambda_init must lie in (0, 0.5]");
        }
        if self.eval_budget < 1 {
            return bad("eval_budget must be at least 1");
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return bad("gamma must lie in [0, 1)");
        }
        Ok(())
    }
}

/// How neighborhood-search operators are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorPolicy {
    /// The Q-network picks per (solution, day).
    Dqn,
    /// Uniform random choice (the "no DQN" ablation).
    UniformRandom,
}

/// One population member.
#[derive(Debug, Clone)]
pub struct SolutionRecord {
    pub sched: Schedule,
    pub fitness: f64,
    pub wavelength: f64,
    pub stagnation_age: u32,
    /// Objective decrement achieved in the previous generation.
    pub last_delta: f64,
    /// Last neighborhood operator applied to this solution (1–4; 0 = none).
    pub last_op: usize,
}

/// Neighborhood budget per day at generation `g`:
/// `⌊ns_min + (g/g_max)²·(ns_max − ns_min)⌋`.
pub fn ns_budget(g: u64, g_max: u64, cfg: &RunConfig) -> usize {
    let frac = if g_max == 0 { 1.0 } else { (g as f64 / g_max as f64).min(1.0) };
    (cfg.ns_min as f64 + frac * frac * (cfg.ns_max - cfg.ns_min) as f64).floor() as usize
}

/// Population size at generation `g`:
/// `⌈pop_max − (g/g_max)²·(pop_max − pop_min)⌉`.
pub fn pop_size(g: u64, g_max: u64, cfg: &RunConfig) -> usize {
    let frac = if g_max == 0 { 1.0 } else { (g as f64 / g_max as f64).min(1.0) };
    (cfg.pop_max as f64 - frac * frac * (cfg.pop_max - cfg.pop_min) as f64).ceil() as usize
}

/// Shrinks every solution's wavelength by `α^(−(f_max−f+ε)/(f_max−f_min+ε))`:
/// fitter solutions shrink more and exploit; poor ones keep exploring.
pub fn update_wavelength(pop: &mut [SolutionRecord], alpha: f64) {
    const EPS: f64 = 1e-9;
    let f_max = pop.iter().map(|s| s.fitness).fold(f64::NEG_INFINITY, f64::max);
    let f_min = pop.iter().map(|s| s.fitness).fold(f64::INFINITY, f64::min);
    for s in pop {
        let exponent = -(f_max - s.fitness + EPS) / (f_max - f_min + EPS);
        s.wavelength *= alpha.powf(exponent);
    }
}

/// `true` if employee `i` can take one more hour on day `d` without breaking
/// the daily cap or any 31-day window cap.
pub fn can_add_hour(sched: &Schedule, ins: &Instance, i: usize, d: usize) -> bool {
    if sched.daily_hours(i, d) + 1 > ins.globals.daily_cap_hours {
        return false;
    }
    let days = ins.horizon_days();
    if days >= 31 {
        let lo = d.saturating_sub(30);
        let hi = d.min(days - 31);
        for w in lo..=hi {
            if sched.window_hours(i, w) + 1 > ins.globals.monthly_cap_hours {
                return false;
            }
        }
    }
    true
}

/// One row of the per-generation run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenLogRow {
    pub gen: u64,
    pub evals_used: u64,
    pub best_f: f64,
    pub median_f: f64,
    pub pop_size: usize,
    pub ns_budget: usize,
    /// Neighborhood-operator selection counts this generation.
    pub op_counts: [u64; 4],
}

impl GenLogRow {
    pub const CSV_HEADER: &'static str =
        "gen,evals_used,best_f,median_f,pop_size,ns_budget,op1,op2,op3,op4";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.gen,
            self.evals_used,
            self.best_f,
            self.median_f,
            self.pop_size,
            self.ns_budget,
            self.op_counts[0],
            self.op_counts[1],
            self.op_counts[2],
            self.op_counts[3]
        )
    }
}

/// Result of one optimizer run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub best: SolutionRecord,
    pub best_outcome: SimOutcome,
    pub log: Vec<GenLogRow>,
    pub evals_used: u64,
    /// Evaluations that entered with static violations (must stay 0).
    pub static_violation_evals: u64,
    /// Curve derivations summed over all search evaluations.
    pub curve_derivations: u64,
    pub op_counts_total: [u64; 4],
    pub g_max: u64,
    pub generations_run: u64,
}

/// Evaluation counters threaded through every simulator call the optimizer
/// makes.
#[derive(Debug, Default, Clone, Copy)]
pub struct EvalStats {
    pub evals: u64,
    pub static_violation_evals: u64,
    pub curve_derivations: u64,
}

impl EvalStats {
    pub fn new() -> Self {
        EvalStats::default()
    }

    pub fn absorb(&mut self, other: &EvalStats) {
        self.evals += other.evals;
        self.static_violation_evals += other.static_violation_evals;
        self.curve_derivations += other.curve_derivations;
    }
}

/// Evaluates with the criterion-6 instrumentation: every schedule entering
/// fitness evaluation must be statically feasible.
pub fn instrumented_eval(ctx: &SimContext, sched: &Schedule, stats: &mut EvalStats) -> SimOutcome {
    if !check_constraints(ctx.ins, sched).is_empty() {
        stats.static_violation_evals += 1;
        debug_assert!(false, "schedule entered evaluation with static violations");
    }
    let outcome = ctx.evaluate(sched);
    stats.evals += 1;
    stats.curve_derivations += outcome.curve_derivations;
    outcome
}

/// Output of one solution's per-generation work (mutation + VNS + repair).
struct SolutionWork {
    record: SolutionRecord,
    outcome: Option<SimOutcome>,
    transitions: Vec<Transition>,
    op_counts: [u64; 4],
    stats: EvalStats,
}

/// Runs the full memetic loop until the evaluation budget is spent and
/// returns the incumbent best with the per-generation log.
pub fn evolve(
    ins: &Instance,
    cfg: &RunConfig,
    emotion: &EmotionAssessor,
    impair: &ImpairmentAssessor,
    mode: EvalMode,
    policy: OperatorPolicy,
) -> Result<RunResult> {
    cfg.validate()?;
    let violations = ins.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidInstance(violations.join("; ")));
    }
    let ctx = SimContext::new(ins, emotion, impair, rng::derive_seed(cfg.seed, &[rng::tag("sim")]), mode)?;
    let days = ins.horizon_days() as u64;

    // Estimated evaluations per generation at initial population size fix
    // the generation count used by the quadratic schedules.
    let est_gen_cost = cfg.pop_max as u64 * (1 + days * cfg.ns_min as u64);
    let g_max = ((cfg.eval_budget.saturating_sub(cfg.pop_max as u64)) / est_gen_cost).max(1);

    let mut stats = EvalStats::new();
    let mut pop: Vec<SolutionRecord> = Vec::with_capacity(cfg.pop_max);
    let mut outcomes: Vec<SimOutcome> = Vec::with_capacity(cfg.pop_max);
    for p in 0..cfg.pop_max {
        if stats.evals >= cfg.eval_budget {
            break;
        }
        let mut sched =
            init::init_solution(&ctx, rng::derive_seed(cfg.seed, &[rng::tag("init"), p as u64]));
        if !check_constraints(ins, &sched).is_empty() {
            repair::repair(&mut sched, ins, &[]);
        }
        let outcome = instrumented_eval(&ctx, &sched, &mut stats);
        pop.push(SolutionRecord {
            sched,
            fitness: outcome.f,
            wavelength: cfg.lambda_init,
            stagnation_age: 0,
            last_delta: 0.0,
            last_op: 0,
        });
        outcomes.push(outcome);
    }
    if pop.is_empty() {
        return Err(Error::InvalidConfig("budget too small to evaluate any solution".into()));
    }

    let incumbent_idx = best_index(&pop);
    let mut best = pop[incumbent_idx].clone();
    let mut best_outcome = outcomes[incumbent_idx].clone();

    let mut net = QNetwork::with_default_size(rng::derive_seed(cfg.seed, &[rng::tag("dqn")]));
    let mut buffer = ReplayBuffer::with_default_capacity();
    let mut train_rng = rng::stream(cfg.seed, &[rng::tag("dqn-train")]);

    let mut log: Vec<GenLogRow> = Vec::new();
    let mut op_counts_total = [0u64; 4];
    let mut g: u64 = 0;

    loop {
        if best.fitness == 0.0 {
            break; // optimum reached
        }
        let ns = ns_budget(g.min(g_max), g_max, cfg);
        // Worst case per solution: mutation eval + D·ns candidates + applied
        // re-eval + repair re-eval.
        let plan_cost = 3 + days * ns as u64;
        let remaining = cfg.eval_budget.saturating_sub(stats.evals);
        let active = ((remaining / plan_cost) as usize).min(pop.len());
        if active == 0 {
            break;
        }

        update_wavelength(&mut pop, cfg.alpha);
        let ranks = fitness_ranks(&pop);
        let f_best = best.fitness;

        let works: Vec<SolutionWork> = pop
            .par_iter()
            .enumerate()
            .map(|(idx, sol)| {
                if idx >= active {
                    return SolutionWork {
                        record: sol.clone(),
                        outcome: None,
                        transitions: Vec::new(),
                        op_counts: [0; 4],
                        stats: EvalStats::new(),
                    };
                }
                let mut rng = rng::stream(
                    cfg.seed,
                    &[rng::tag("gen"), g, rng::tag("sol"), idx as u64],
                );
                generation_work(&ctx, policy, &net, sol, ranks[idx], f_best, ns, &mut rng)
            })
            .collect();

        let mut gen_ops = [0u64; 4];
        let mut next_pop = Vec::with_capacity(pop.len());
        for work in &works {
            stats.absorb(&work.stats);
            for k in 0..4 {
                gen_ops[k] += work.op_counts[k];
                op_counts_total[k] += work.op_counts[k];
            }
            next_pop.push(work.record.clone());
        }
        pop = next_pop;

        // Patch the dangling next-state of each solution's last transition
        // with the post-generation view, then train at the sync point.
        if policy == OperatorPolicy::Dqn {
            let new_ranks = fitness_ranks(&pop);
            for (idx, work) in works.iter().enumerate() {
                let mut transitions = work.transitions.clone();
                if let Some(last) = transitions.last_mut() {
                    if let Some(next) = last.next.as_mut() {
                        let s = &pop[idx];
                        next.f_ratio = s.fitness / f_best.max(f64::MIN_POSITIVE);
                        next.delta_ratio = s.last_delta / f_best.max(f64::MIN_POSITIVE);
                        next.rank_norm = new_ranks[idx];
                    }
                }
                for t in transitions {
                    dqn::record_and_train(&mut net, &mut buffer, t, cfg.gamma, &mut train_rng);
                }
            }
        }

        let gen_best = best_index(&pop);
        if pop[gen_best].fitness < best.fitness {
            best = pop[gen_best].clone();
            best_outcome = works[gen_best]
                .outcome
                .clone()
                .expect("a newly improved solution was active this generation");
            debug_assert_eq!(best_outcome.f, best.fitness);
        }

        log.push(GenLogRow {
            gen: g,
            evals_used: stats.evals,
            best_f: best.fitness,
            median_f: median(pop.iter().map(|s| s.fitness)),
            pop_size: pop.len(),
            ns_budget: ns,
            op_counts: gen_ops,
        });

        // Population-size reduction: every unit decrease removes the most
        // stagnant solution among the worse-fitness half.
        let target = pop_size((g + 1).min(g_max), g_max, cfg);
        while pop.len() > target {
            let mut order: Vec<usize> = (0..pop.len()).collect();
            order.sort_by(|&a, &b| pop[a].fitness.total_cmp(&pop[b].fitness).then(a.cmp(&b)));
            let worse_half = &order[pop.len() - pop.len() / 2..];
            let victim = *worse_half
                .iter()
                .max_by(|&&a, &&b| {
                    pop[a]
                        .stagnation_age
                        .cmp(&pop[b].stagnation_age)
                        .then(pop[a].fitness.total_cmp(&pop[b].fitness))
                        .then(a.cmp(&b))
                })
                .expect("worse half is nonempty");
            pop.remove(victim);
        }

        g += 1;
    }

    let generations_run = g;
    Ok(RunResult {
        best,
        best_outcome,
        log,
        evals_used: stats.evals,
        static_violation_evals: stats.static_violation_evals,
        curve_derivations: stats.curve_derivations,
        op_counts_total,
        g_max,
        generations_run,
    })
}

/// What one neighborhood-search pass over the D short-term schedules did.
pub struct NsReport {
    /// Attempted candidates, exactly `D·ns` per call.
    pub candidates: u64,
    pub improved: bool,
    /// Operator (1–4) of the applied move, 0 when nothing improved.
    pub applied_op: usize,
    /// Last operator selected, 1–4.
    pub last_selected: usize,
    pub op_counts: [u64; 4],
    pub transitions: Vec<Transition>,
    /// Fitness after the pass.
    pub fitness: f64,
}

/// Variable neighborhood search: for each day, one agent-selected operator
/// and `ns` attempted moves; the single best of all candidates replaces the
/// schedule iff strictly better under full-simulation fitness.
#[allow(clippy::too_many_arguments)]
pub fn neighborhood_search(
    sched: &mut Schedule,
    fitness_in: f64,
    f_best: f64,
    ctx: &SimContext,
    net: &QNetwork,
    policy: OperatorPolicy,
    ns: usize,
    base_state: SearchState,
    stats: &mut EvalStats,
    rng: &mut impl rand::Rng,
) -> NsReport {
    let days = ctx.ins.horizon_days();
    let mut state = base_state;
    let mut transitions = Vec::with_capacity(days);
    let mut op_counts = [0u64; 4];
    let mut candidates = 0u64;
    let mut global_best: Option<(f64, LsMove)> = None;
    let mut last_selected = (base_state.idl_norm * 4.0).round() as usize;
    let safe_best = f_best.max(f64::MIN_POSITIVE);

    for d in 0..days {
        let op = match policy {
            OperatorPolicy::Dqn => net.select_operator(&state, rng),
            OperatorPolicy::UniformRandom => rng.random_range(0..4),
        };
        op_counts[op] += 1;
        last_selected = op + 1;

        let mut day_best: Option<(f64, LsMove)> = None;
        for _ in 0..ns {
            candidates += 1;
            let Some(mv) = local_search::generate_move(sched, ctx, op, d, rng) else {
                continue; // no legal move: a no-op candidate
            };
            let undo = local_search::apply(sched, &mv);
            let cand = instrumented_eval(ctx, sched, stats);
            local_search::undo(sched, undo);
            if day_best.as_ref().map_or(true, |(bf, _)| cand.f < *bf) {
                day_best = Some((cand.f, mv));
            }
        }
        let reward = match &day_best {
            Some((bf, _)) if *bf < fitness_in => (fitness_in - bf) / safe_best,
            _ => 0.0,
        };
        if let Some((bf, mv)) = day_best {
            if global_best.as_ref().map_or(true, |(gf, _)| bf < *gf) {
                global_best = Some((bf, mv));
            }
        }
        let next = SearchState { idl_norm: (op + 1) as f64 / 4.0, ..state };
        transitions.push(Transition { state, action: op, reward, next: Some(next) });
        state = next;
    }

    let mut applied_op = 0usize;
    let mut fitness = fitness_in;
    let mut improved = false;
    if let Some((bf, mv)) = global_best {
        if bf < fitness_in {
            local_search::apply(sched, &mv);
            fitness = bf;
            improved = true;
            applied_op = mv.operator() + 1;
        }
    }
    NsReport {
        candidates,
        improved,
        applied_op,
        last_selected,
        op_counts,
        transitions,
        fitness,
    }
}

/// Mutation, neighborhood search, and repair for one solution.
#[allow(clippy::too_many_arguments)]
fn generation_work(
    ctx: &SimContext,
    policy: OperatorPolicy,
    net: &QNetwork,
    sol: &SolutionRecord,
    rank_norm: f64,
    f_best: f64,
    ns: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> SolutionWork {
    let ins = ctx.ins;
    let mut stats = EvalStats::new();
    let f_prev = sol.fitness;

    let mut sched = sol.sched.clone();
    mutation::mutate(&mut sched, ctx, sol.wavelength, rng);
    if !check_constraints(ins, &sched).is_empty() {
        repair::repair(&mut sched, ins, &[]);
    }
    let outcome = instrumented_eval(ctx, &sched, &mut stats);
    let fitness = outcome.f;

    let safe_best = f_best.max(f64::MIN_POSITIVE);
    let base_state = SearchState {
        f_ratio: fitness / safe_best,
        delta_ratio: sol.last_delta / safe_best,
        rank_norm,
        idl_norm: sol.last_op as f64 / 4.0,
    };
    let report = neighborhood_search(
        &mut sched, fitness, f_best, ctx, net, policy, ns, base_state, &mut stats, rng,
    );
    let mut fitness = report.fitness;

    // The winning candidate was evaluated with its move applied and undone;
    // re-derive the outcome for repair bookkeeping when something changed.
    let mut outcome = if report.improved {
        let o = instrumented_eval(ctx, &sched, &mut stats);
        debug_assert_eq!(o.f, fitness);
        o
    } else {
        outcome
    };

    // Repair when the evaluation surfaced impairment violations, then
    // re-evaluate once.
    let impairments: Vec<_> = outcome
        .impairment_violations()
        .map(|v| match *v {
            crate::sim::ConstraintViolation::Impairment { employee, day, hour } => {
                (employee, day, hour)
            }
            _ => unreachable!(),
        })
        .collect();
    if !impairments.is_empty() {
        repair::repair_with_impairments(&mut sched, ins, &impairments);
        outcome = instrumented_eval(ctx, &sched, &mut stats);
        fitness = outcome.f;
    }

    let improved = fitness < f_prev;
    let record = SolutionRecord {
        sched,
        fitness,
        wavelength: sol.wavelength,
        stagnation_age: if improved { 0 } else { sol.stagnation_age + 1 },
        last_delta: f_prev - fitness,
        last_op: if report.applied_op != 0 { report.applied_op } else { report.last_selected },
    };
    SolutionWork {
        record,
        outcome: Some(outcome),
        transitions: report.transitions,
        op_counts: report.op_counts,
        stats,
    }
}

fn best_index(pop: &[SolutionRecord]) -> usize {
    pop.iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.fitness.total_cmp(&b.fitness).then(ia.cmp(ib)))
        .map(|(i, _)| i)
        .expect("population is nonempty")
}

/// 1-based fitness rank of each solution scaled to `(0,1]` (best → 1/N).
fn fitness_ranks(pop: &[SolutionRecord]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| pop[a].fitness.total_cmp(&pop[b].fitness).then(a.cmp(&b)));
    let mut ranks = vec![0.0; pop.len()];
    for (rank0, &idx) in order.iter().enumerate() {
        ranks[idx] = (rank0 + 1) as f64 / pop.len() as f64;
    }
    ranks
}

fn median(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
