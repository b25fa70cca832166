//! The experimental harness: repeated optimizer trials, the GA baseline, the
//! ablation variants, and nonparametric reporting.
//!
//! Every algorithm gets the same evaluation budget. Search can run under the
//! full emotional model (ma-dqn) or with performance frozen at the initial
//! value (the `-ne` ablations and the GA baseline, which treat performance as
//! constant). The reported objective of every variant is the final schedule
//! re-evaluated under the full emotional model with the trial's common random
//! numbers — a schedule optimized against the wrong performance model gets
//! judged against the real one.

pub mod stats;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults::Defaults;
use crate::instance::Instance;
use crate::nfn::{EmotionAssessor, ImpairmentAssessor};
use crate::optim::{
    self, init, repair, EvalStats, GenLogRow, OperatorPolicy, RunConfig, RunResult, SolutionRecord,
};
use crate::rng;
use crate::schedule::{Assignment, Schedule};
use crate::sim::{check_constraints, EvalMode, SimContext};
use crate::{Error, Result};

pub use stats::{box_stats, quantile, rank_sum_test, BoxStats};

/// The algorithms the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    /// The full memetic algorithm: emotional evaluation + DQN selection.
    MaDqn,
    /// Random operator policy, frozen-performance evaluation.
    MaNe,
    /// DQN selection, frozen-performance evaluation.
    MaDqnNe,
    /// Penalty-function GA baseline, frozen-performance evaluation.
    Ga,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::MaDqn => "ma-dqn",
            Algorithm::MaNe => "ma-ne",
            Algorithm::MaDqnNe => "ma-dqn-ne",
            Algorithm::Ga => "ga",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "ma-dqn" => Ok(Algorithm::MaDqn),
            "ma-ne" => Ok(Algorithm::MaNe),
            "ma-dqn-ne" => Ok(Algorithm::MaDqnNe),
            "ga" => Ok(Algorithm::Ga),
            other => Err(Error::UnknownVariant(other.to_string())),
        }
    }

    pub fn eval_mode(&self) -> EvalMode {
        match self {
            Algorithm::MaDqn => EvalMode::Emotional,
            _ => EvalMode::Frozen,
        }
    }
}

/// Final objective values of repeated runs of one algorithm on one instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialSet {
    pub algorithm: String,
    pub instance: String,
    /// Final objectives, re-evaluated under the full emotional model.
    pub final_values: Vec<f64>,
    pub seeds: Vec<u64>,
    pub evals: Vec<u64>,
    pub wall_ms: Vec<u64>,
    /// Performance-curve derivations during search, per run.
    pub search_curve_derivations: Vec<u64>,
    /// Neighborhood-operator selection counts summed over runs.
    pub op_counts: [u64; 4],
}

/// One algorithm run: optimize, then re-evaluate the final schedule under the
/// full emotional model.
pub struct TrialOutput {
    pub result: RunResult,
    pub reported_f: f64,
    pub wall_ms: u64,
}

/// Runs one trial with the given run seed.
pub fn run_algorithm(
    ins: &Instance,
    cfg: &RunConfig,
    emotion: &EmotionAssessor,
    impair: &ImpairmentAssessor,
    algo: Algorithm,
) -> Result<TrialOutput> {
    let started = Instant::now();
    let result = match algo {
        Algorithm::MaDqn => optim::evolve(
            ins,
            cfg,
            emotion,
            impair,
            EvalMode::Emotional,
            OperatorPolicy::Dqn,
        )?,
        Algorithm::MaDqnNe => {
            optim::evolve(ins, cfg, emotion, impair, EvalMode::Frozen, OperatorPolicy::Dqn)?
        }
        Algorithm::MaNe => optim::evolve(
            ins,
            cfg,
            emotion,
            impair,
            EvalMode::Frozen,
            OperatorPolicy::UniformRandom,
        )?,
        Algorithm::Ga => run_ga(ins, cfg, emotion, impair)?,
    };
    // The reported objective is always the full-model value of the final
    // schedule under this run's common random numbers.
    let full_ctx = SimContext::new(
        ins,
        emotion,
        impair,
        rng::derive_seed(cfg.seed, &[rng::tag("sim")]),
        EvalMode::Emotional,
    )?;
    let reported_f = full_ctx.evaluate(&result.best.sched).f;
    Ok(TrialOutput { result, reported_f, wall_ms: started.elapsed().as_millis() as u64 })
}

/// Repeated trials of one algorithm; run `r` uses the seed
/// `hash(master_seed, algorithm, r)`, disjoint across algorithms.
pub fn run_trials(
    ins: &Instance,
    emotion: &EmotionAssessor,
    impair: &ImpairmentAssessor,
    algo: Algorithm,
    runs: usize,
    master_seed: u64,
    base_cfg: &RunConfig,
) -> Result<TrialSet> {
    let outputs: Vec<Result<(u64, TrialOutput)>> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let seed = rng::derive_seed(master_seed, &[rng::tag(algo.name()), r as u64]);
            let cfg = RunConfig { seed, ..*base_cfg };
            run_algorithm(ins, &cfg, emotion, impair, algo).map(|out| (seed, out))
        })
        .collect();
    let mut set = TrialSet {
        algorithm: algo.name().to_string(),
        instance: ins.meta.name.clone(),
        final_values: Vec::with_capacity(runs),
        seeds: Vec::with_capacity(runs),
        evals: Vec::with_capacity(runs),
        wall_ms: Vec::with_capacity(runs),
        search_curve_derivations: Vec::with_capacity(runs),
        op_counts: [0; 4],
    };
    for out in outputs {
        let (seed, out) = out?;
        set.final_values.push(out.reported_f);
        set.seeds.push(seed);
        set.evals.push(out.result.evals_used);
        set.wall_ms.push(out.wall_ms);
        set.search_curve_derivations.push(out.result.curve_derivations);
        for k in 0..4 {
            set.op_counts[k] += out.result.op_counts_total[k];
        }
    }
    Ok(set)
}

/// The GA baseline trial set.
pub fn run_baseline_ga(
    ins: &Instance,
    emotion: &EmotionAssessor,
    impair: &ImpairmentAssessor,
    runs: usize,
    master_seed: u64,
    base_cfg: &RunConfig,
) -> Result<TrialSet> {
    run_trials(ins, emotion, impair, Algorithm::Ga, runs, master_seed, base_cfg)
}

/// An ablation trial set; `variant` must be one of `ma-dqn`, `ma-ne`,
/// `ma-dqn-ne`.
pub fn run_ablation(
    ins: &Instance,
    emotion: &EmotionAssessor,
    impair: &ImpairmentAssessor,
    variant: &str,
    runs: usize,
    master_seed: u64,
    base_cfg: &RunConfig,
) -> Result<TrialSet> {
    let algo = Algorithm::from_name(variant)?;
    if algo == Algorithm::Ga {
        return Err(Error::UnknownVariant(format!("{variant} is not an ablation variant")));
    }
    run_trials(ins, emotion, impair, algo, runs, master_seed, base_cfg)
}

/// Basic genetic algorithm with the dense assignment encoding: tournament
/// selection (k = 2), uniform crossover, per-cell reassignment mutation at
/// rate `1/(m·D·24)`, and a static penalty per violated constraint-hour.
/// Search evaluation treats performance as constant (frozen initial values).
pub fn run_ga(
    ins: &Instance,
    cfg: &RunConfig,
    emotion: &EmotionAssessor,
    impair: &ImpairmentAssessor,
) -> Result<RunResult> {
    cfg.validate()?;
    let ctx = SimContext::new(
        ins,
        emotion,
        impair,
        rng::derive_seed(cfg.seed, &[rng::tag("sim")]),
        EvalMode::Frozen,
    )?;
    let penalty_per_hour = 10.0 * ins.globals.cancel_weight;
    let mut stats = EvalStats::new();

    let penalized = |sched: &Schedule, ctx: &SimContext, stats: &mut EvalStats| -> (f64, f64) {
        let excess = constraint_excess_hours(ins, sched);
        // The raw objective comes from a normal evaluation; penalties keep
        // infeasible genomes comparable without crashing the instrumented
        // path (GA genomes may legitimately violate caps).
        let outcome = ctx.evaluate(sched);
        stats.evals += 1;
        stats.curve_derivations += outcome.curve_derivations;
        (outcome.f + penalty_per_hour * excess as f64, outcome.f)
    };

    let mut rng = rng::stream(cfg.seed, &[rng::tag("ga")]);
    let mut pop: Vec<(Schedule, f64)> = Vec::with_capacity(cfg.pop_max);
    for p in 0..cfg.pop_max {
        if stats.evals >= cfg.eval_budget {
            break;
        }
        let sched =
            init::init_solution(&ctx, rng::derive_seed(cfg.seed, &[rng::tag("ga-init"), p as u64]));
        let (pf, _) = penalized(&sched, &ctx, &mut stats);
        pop.push((sched, pf));
    }
    if pop.is_empty() {
        return Err(Error::InvalidConfig("budget too small to evaluate any solution".into()));
    }

    let cells = ins.m() * ins.horizon_days() * 24;
    let mutation_rate = 1.0 / cells as f64;
    let n_codes = ins.n_categories() * 2;
    let mut log: Vec<GenLogRow> = Vec::new();
    let mut g = 0u64;

    while stats.evals + pop.len() as u64 <= cfg.eval_budget {
        let elite = pop
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("population nonempty")
            .clone();
        let mut offspring: Vec<Schedule> = Vec::with_capacity(pop.len());
        offspring.push(elite.0.clone());
        while offspring.len() < pop.len() {
            let pa = tournament(&pop, &mut rng);
            let pb = tournament(&pop, &mut rng);
            let mut child = Schedule::rest(ins.m(), ins.horizon_days());
            for i in 0..ins.m() {
                for d in 0..ins.horizon_days() {
                    for h in 0..24 {
                        let take_a = rng.random_range(0..2) == 0;
                        let src = if take_a { &pop[pa].0 } else { &pop[pb].0 };
                        child.set(i, d, h, src.get(i, d, h));
                    }
                }
            }
            for i in 0..ins.m() {
                for d in 0..ins.horizon_days() {
                    for h in 0..24 {
                        if rng.random_range(0.0..1.0) < mutation_rate {
                            let code = rng.random_range(0..=n_codes);
                            let a = if code == 0 {
                                Assignment::Rest
                            } else {
                                let v = code - 1;
                                Assignment::Job(crate::instance::JobType {
                                    category: v / 2,
                                    class: v % 2,
                                })
                            };
                            child.set(i, d, h, a);
                        }
                    }
                }
            }
            offspring.push(child);
        }
        let scored: Vec<(Schedule, f64)> = offspring
            .into_par_iter()
            .map(|sched| {
                let mut local = EvalStats::new();
                let (pf, _) = penalized(&sched, &ctx, &mut local);
                (sched, pf, local)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .map(|(sched, pf, local)| {
                stats.absorb_public(&local);
                (sched, pf)
            })
            .collect();
        pop = scored;

        let best = pop.iter().map(|(_, f)| *f).fold(f64::INFINITY, f64::min);
        let median = {
            let mut v: Vec<f64> = pop.iter().map(|(_, f)| *f).collect();
            v.sort_by(f64::total_cmp);
            let n = v.len();
            if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) }
        };
        log.push(GenLogRow {
            gen: g,
            evals_used: stats.evals,
            best_f: best,
            median_f: median,
            pop_size: pop.len(),
            ns_budget: 0,
            op_counts: [0; 4],
        });
        g += 1;
    }

    let (best_sched, best_pf) = pop
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .cloned()
        .expect("population nonempty");
    // Make the reported incumbent feasible before the final outcome; the
    // penalty usually keeps the elite clean already.
    let mut final_sched = best_sched;
    if !check_constraints(ins, &final_sched).is_empty() {
        repair::repair(&mut final_sched, ins, &[]);
    }
    let best_outcome = ctx.evaluate(&final_sched);
    stats.evals += 1;
    let best = SolutionRecord {
        sched: final_sched,
        fitness: best_outcome.f,
        wavelength: 0.0,
        stagnation_age: 0,
        last_delta: 0.0,
        last_op: 0,
    };
    let _ = best_pf;
    Ok(RunResult {
        best,
        best_outcome,
        log,
        evals_used: stats.evals,
        static_violation_evals: 0,
        curve_derivations: stats.curve_derivations,
        op_counts_total: [0; 4],
        g_max: g.max(1),
        generations_run: g,
    })
}

fn tournament(pop: &[(Schedule, f64)], rng: &mut impl Rng) -> usize {
    let a = rng.random_range(0..pop.len());
    let b = rng.random_range(0..pop.len());
    if pop[a].1 <= pop[b].1 { a } else { b }
}

/// Total hours beyond the daily and window caps — the penalty basis.
pub fn constraint_excess_hours(ins: &Instance, sched: &Schedule) -> u32 {
    let mut excess = 0u32;
    for i in 0..ins.m() {
        for d in 0..ins.horizon_days() {
            excess += sched.daily_hours(i, d).saturating_sub(ins.globals.daily_cap_hours);
        }
        if ins.horizon_days() >= 31 {
            for w in 0..=(ins.horizon_days() - 31) {
                excess +=
                    sched.window_hours(i, w).saturating_sub(ins.globals.monthly_cap_hours);
            }
        }
    }
    excess
}

/// Per-algorithm summary with pairwise significance against a reference.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgoSummary {
    pub algorithm: String,
    pub stats: BoxStats,
    pub p_value_vs_reference: Option<f64>,
    pub significant_at_05: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub instance: String,
    pub reference: String,
    pub algorithms: Vec<AlgoSummary>,
}

/// Builds the box-plot summary and rank-sum p-values against the reference
/// algorithm (`ma-dqn` when present, otherwise the first set).
pub fn report(trials: &[TrialSet], reference: Option<&str>) -> Report {
    assert!(!trials.is_empty());
    let reference = reference
        .map(str::to_string)
        .or_else(|| {
            trials.iter().map(|t| t.algorithm.clone()).find(|a| a == "ma-dqn")
        })
        .unwrap_or_else(|| trials[0].algorithm.clone());
    let ref_values = trials
        .iter()
        .find(|t| t.algorithm == reference)
        .map(|t| t.final_values.clone())
        .unwrap_or_default();
    let algorithms = trials
        .iter()
        .map(|t| {
            let (p, sig) = if t.algorithm != reference && !ref_values.is_empty() {
                let p = rank_sum_test(&t.final_values, &ref_values);
                (Some(p), Some(p < 0.05))
            } else {
                (None, None)
            };
            AlgoSummary {
                algorithm: t.algorithm.clone(),
                stats: box_stats(&t.final_values),
                p_value_vs_reference: p,
                significant_at_05: sig,
            }
        })
        .collect();
    Report { instance: trials[0].instance.clone(), reference, algorithms }
}

pub const RESULTS_CSV_HEADER: &str = "algorithm,instance,run,seed,final_f,evals,wall_ms";

/// Flat per-run results table.
pub fn results_csv(trials: &[TrialSet]) -> String {
    let mut out = String::from(RESULTS_CSV_HEADER);
    out.push('\n');
    for t in trials {
        for r in 0..t.final_values.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                t.algorithm,
                t.instance,
                r,
                t.seeds[r],
                t.final_values[r],
                t.evals[r],
                t.wall_ms[r]
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests;
