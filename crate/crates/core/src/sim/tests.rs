use super::*;
use crate::instance::{
    desk_spec, generate, EmployeeProfile, Globals, Instance, JobParams, JobParamsPair, JobType,
    Meta,
};
use crate::nfn::{StressFactors, TskNetwork};
use crate::perf::{CurveBaselines, EmotionalState};
use crate::schedule::{Assignment, Schedule};

fn zeroed_factors() -> StressFactors {
    StressFactors {
        age: 30.0,
        gender: 0.0,
        bmi: 22.0,
        commuting_hours: 0.5,
        sleeping_hours: 8.0,
        pit: 100.0,
        pit_sad: 100.0,
        yoe: 5.0,
        d_cont: 0.0,
        d_month: 0.0,
        d_season: 0.0,
        t_day: 0.0,
        t_week: 0.0,
        t_month: 0.0,
        t_season: 0.0,
        t_day_hard: 0.0,
        t_week_hard: 0.0,
        t_month_hard: 0.0,
        t_season_hard: 0.0,
    }
}

/// One-category instance with explicit per-hour easy rates and `m` identical
/// skilled employees.
pub(crate) fn tiny_instance(
    m: usize,
    days: usize,
    easy_rate_by_hour: &[(usize, f64)],
    cancel_coeff: f64,
) -> Instance {
    let mut rates = vec![0.0; 2 * 24 * days];
    for &(h, r) in easy_rate_by_hour {
        for d in 0..days {
            rates[h * days + d] = r;
        }
    }
    let employees = (0..m)
        .map(|id| EmployeeProfile {
            id,
            skills: vec![[1.0, 1.0]],
            factors: zeroed_factors(),
            baseline_emotions: EmotionalState::new(1.0, 5.0, 1.0, 5.0, 5.0),
        })
        .collect();
    Instance::new(
        Meta::default(),
        Globals {
            daily_cap_hours: 10,
            monthly_cap_hours: 212,
            cancel_weight: 2.0,
            avg_daily_hours: 8.0,
            curve_baselines: [
                CurveBaselines { t_rise: 45.0, t_peak: 24.0, t_fall: 72.0 },
                CurveBaselines { t_rise: 25.0, t_peak: 18.0, t_fall: 36.0 },
            ],
        },
        vec![JobParamsPair {
            easy: JobParams {
                mean_service_time: 4.0,
                weight: 1.5,
                wait_threshold: 5.0,
                cancel_coeff,
            },
            hard: JobParams {
                mean_service_time: 9.0,
                weight: 2.0,
                wait_threshold: 10.0,
                cancel_coeff,
            },
        }],
        employees,
        1,
        days,
        rates,
    )
    .unwrap()
}

fn untrained_assessors() -> (crate::nfn::EmotionAssessor, crate::nfn::ImpairmentAssessor) {
    (
        crate::nfn::EmotionAssessor::init_random(2, 1),
        crate::nfn::ImpairmentAssessor::init_random(2, 2),
    )
}

/// A plain roster: everybody works `hours` on every day, round-robin over job
/// types weighted 2:1 toward the easy class.
pub(crate) fn naive_schedule(ins: &Instance, hours: std::ops::Range<usize>) -> Schedule {
    let mut s = Schedule::rest(ins.m(), ins.horizon_days());
    for i in 0..ins.m() {
        let job = JobType { category: i % ins.n_categories(), class: usize::from(i % 3 == 2) };
        for d in 0..ins.horizon_days() {
            for h in hours.clone() {
                s.set(i, d, h, Assignment::Job(job));
            }
        }
    }
    s
}

#[test]
fn zero_rates_mean_zero_objective() {
    let ins = tiny_instance(1, 1, &[], 0.2);
    let (em, im) = untrained_assessors();
    let out = simulate(&ins, &Schedule::rest(1, 1), &em, &im, 3).unwrap();
    assert_eq!(out.total_arrived, 0);
    assert_eq!(out.f, 0.0);
    assert_eq!(out.total_canceled, 0);
}

#[test]
fn single_request_at_peak_served_in_exact_mean_time() {
    // Untrained assessor: every emotional level clamps to 1, so u_max equals
    // the skill (1.0), q = sqrt(1/6), sigma_rise = 45·2^1.2. The curve peaks
    // at u = 1 between mu_rise and mu_rise + peak_len minutes of stint time.
    let ins = tiny_instance(1, 1, &[(10, 2.0)], 0.2);
    let (em, im) = untrained_assessors();
    let state = em.assess(&ins.employees[0].baseline_emotions, &ins.employees[0].factors);
    assert_eq!(state.as_array(), [1.0; 5]);
    let curve = crate::perf::derive_curve(1.0, &state, &ins.globals.curve_baselines[0]);
    assert_eq!(curve.u_max, 1.0);

    let mut sched = Schedule::rest(1, 1);
    for h in 8..12 {
        sched.set(0, 0, h, Assignment::Job(JobType { category: 0, class: 0 }));
    }
    // Stint starts at 8:00 = 480 min; peak spans [480+mu, 480+mu+peak].
    let lo = 480.0 + curve.mu_rise + 1.0;
    let hi = 480.0 + curve.peak_end() - 5.0;
    let seed = (0..5000u64)
        .find(|&s| {
            let ctx = SimContext::new(&ins, &em, &im, s, EvalMode::Emotional).unwrap();
            let a = ctx.arrivals();
            a.len() == 1 && a[0].time > lo && a[0].time < hi
        })
        .expect("some seed yields exactly one in-peak arrival");
    let ctx = SimContext::new(&ins, &em, &im, seed, EvalMode::Emotional).unwrap();
    let (out, trace) = ctx.evaluate_traced(&sched).unwrap();
    assert_eq!(out.total_arrived, 1);
    assert_eq!(out.total_served, 1);
    assert_eq!(out.total_delayed, 0);
    assert_eq!(out.total_canceled, 0);
    assert_eq!(out.f, 0.0);
    let start = trace.iter().find(|t| t.event == "service_start").unwrap();
    let end = trace.iter().find(|t| t.event == "service_end").unwrap();
    assert_eq!(start.wait_min, 0.0);
    assert_eq!(end.time_min - start.time_min, 4.0);
}

#[test]
fn unstaffed_queue_closed_form() {
    // Nobody ever works: every request misses its threshold and abandons, so
    // f_delay = w·n, f_cancel = w·n, f = w·n·(1 + cancel_weight).
    let ins = tiny_instance(2, 2, &[(9, 30.0), (14, 30.0)], 0.2);
    let (em, im) = untrained_assessors();
    let out = simulate(&ins, &Schedule::rest(2, 2), &em, &im, 11).unwrap();
    let n = out.total_arrived;
    assert!(n > 50);
    assert_eq!(out.total_delayed, n);
    assert_eq!(out.total_canceled, n);
    assert_eq!(out.total_served, 0);
    let w = 1.5;
    assert_eq!(out.f_delay, w * n as f64);
    assert_eq!(out.f_cancel, w * n as f64);
    assert_eq!(out.f, w * n as f64 * (1.0 + 2.0));
}

#[test]
fn per_minute_cancellation_matches_conditional_law() {
    // Among unserved requests alive at the k-th waiting minute, the fraction
    // canceled right there estimates 1 − exp(−ε·k).
    let ins = tiny_instance(1, 2, &[(9, 120.0), (13, 120.0)], 0.2);
    let (em, im) = untrained_assessors();
    let mut hist = vec![0u64; CANCEL_HISTOGRAM_MINUTES];
    for seed in 0..10 {
        let out = simulate(&ins, &Schedule::rest(1, 2), &em, &im, seed).unwrap();
        for (k, &c) in out.cancel_wait_histogram.iter().enumerate() {
            hist[k] += c as u64;
        }
    }
    for k in 1..=3usize {
        let alive: u64 = hist[k..].iter().sum();
        let here = hist[k];
        let p_hat = here as f64 / alive as f64;
        let p = 1.0 - (-0.2 * k as f64).exp();
        let ci = 3.0 * (p * (1.0 - p) / alive as f64).sqrt();
        assert!(
            (p_hat - p).abs() < ci.max(0.02),
            "minute {k}: observed {p_hat:.4}, law {p:.4}, alive {alive}"
        );
    }
}

#[test]
fn identical_inputs_identical_outcomes() {
    let ins = generate(&desk_spec(2)).unwrap();
    let (em, im) = crate::nfn::train_default_assessors(8, 5);
    let sched = naive_schedule(&ins, 9..17);
    let ctx = SimContext::new(&ins, &em, &im, 77, EvalMode::Emotional).unwrap();
    let a = ctx.evaluate(&sched);
    let b = ctx.evaluate(&sched);
    let c = simulate(&ins, &sched, &em, &im, 77).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn conservation_holds_across_seeds() {
    let ins = generate(&desk_spec(4)).unwrap();
    let (em, im) = crate::nfn::train_default_assessors(8, 5);
    let sched = naive_schedule(&ins, 9..17);
    for seed in 0..10 {
        let ctx = SimContext::new(&ins, &em, &im, seed, EvalMode::Emotional).unwrap();
        let out = ctx.evaluate(&sched);
        assert_eq!(
            out.total_arrived,
            out.total_served + out.total_canceled + out.in_service_at_end as u64,
            "seed {seed}"
        );
        assert!(out.total_delayed <= out.total_arrived);
        let cell_sum: u64 = out.arrived.iter().map(|&x| x as u64).sum();
        assert_eq!(cell_sum, out.total_arrived);
        assert_eq!(out.f, out.f_delay + ins.globals.cancel_weight * out.f_cancel);
    }
}

#[test]
fn doubling_rates_doubles_arrivals() {
    let base = generate(&desk_spec(9)).unwrap();
    let mut doubled_spec = desk_spec(9);
    doubled_spec.mean_easy_rate *= 2.0;
    doubled_spec.mean_hard_rate *= 2.0;
    let doubled = generate(&doubled_spec).unwrap();
    let count = |ins: &Instance| -> u64 {
        (0..15u64).map(|s| build_arrivals(ins, s).len() as u64).sum()
    };
    let ratio = count(&doubled) as f64 / count(&base) as f64;
    assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn extra_skilled_employee_does_not_hurt() {
    let ins = generate(&desk_spec(13)).unwrap();
    let (em, im) = crate::nfn::train_default_assessors(8, 5);
    let sched = naive_schedule(&ins, 9..17);

    let mut extra = ins.employees[0].clone();
    extra.id = ins.m();
    extra.skills = vec![[0.95, 0.9]; ins.n_categories()];
    extra.baseline_emotions = EmotionalState::new(2.0, 4.0, 2.0, 4.0, 4.0);
    let mut employees = ins.employees.clone();
    employees.push(extra);
    let augmented = Instance::new(
        ins.meta.clone(),
        ins.globals.clone(),
        ins.job_params.clone(),
        employees,
        ins.n_categories(),
        ins.horizon_days(),
        ins.rates().to_vec(),
    )
    .unwrap();
    let mut aug_sched = Schedule::rest(augmented.m(), augmented.horizon_days());
    for i in 0..ins.m() {
        for d in 0..ins.horizon_days() {
            for h in 0..24 {
                aug_sched.set(i, d, h, sched.get(i, d, h));
            }
        }
    }
    for d in 0..augmented.horizon_days() {
        for h in 9..17 {
            aug_sched.set(ins.m(), d, h, Assignment::Job(JobType { category: 0, class: 0 }));
        }
    }

    let mut worse = 0usize;
    let mut informative = 0usize;
    for seed in 0..20u64 {
        let a = SimContext::new(&ins, &em, &im, seed, EvalMode::Emotional)
            .unwrap()
            .evaluate(&sched);
        let b = SimContext::new(&augmented, &em, &im, seed, EvalMode::Emotional)
            .unwrap()
            .evaluate(&aug_sched);
        if b.f != a.f {
            informative += 1;
            if b.f > a.f {
                worse += 1;
            }
        }
    }
    // One-sided sign test at α = 0.05: reject "no harm" only if the number of
    // worsened seeds is improbably high under p = 1/2.
    let p_tail: f64 = (worse..=informative)
        .map(|k| binomial(informative, k) * 0.5f64.powi(informative as i32))
        .sum();
    assert!(
        informative == 0 || p_tail >= 0.05,
        "staffing increase significantly worsened f: {worse}/{informative} seeds (p={p_tail:.4})"
    );
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[test]
fn severely_impaired_employee_stops_serving() {
    // Hand-built assessors: depression climbs with weekly hours
    // (1 + 6·t_week/70), impairment = 2·(dep−1)/4 − 0.4. With 8h days the
    // grade reaches Severe (0.8) when t_week hits 28h: four hours into day 3.
    let ins = tiny_instance(1, 7, &[(9, 8.0), (11, 8.0), (13, 8.0), (15, 8.0)], 0.1);
    let mut em = crate::nfn::EmotionAssessor::init_random(1, 1);
    for (k, net) in em.networks.iter_mut().enumerate() {
        let mut flat = TskNetwork::with_antecedents(20, 1, vec![0.5; 20], vec![1e30; 20]);
        let mut coefs = vec![0.0; 21];
        if k == 0 {
            coefs[0] = 1.0;
            coefs[1 + 13] = 6.0; // input 13 = normalized t_week
        } else {
            coefs[0] = 3.0;
        }
        flat.set_coefficients(coefs);
        *net = flat;
    }
    let mut im = crate::nfn::ImpairmentAssessor::init_random(1, 2);
    let mut imp_net = TskNetwork::with_antecedents(5, 1, vec![0.5; 5], vec![1e30; 5]);
    imp_net.set_coefficients(vec![-0.4, 2.0, 0.0, 0.0, 0.0, 0.0]);
    im.network = imp_net;

    let mut sched = Schedule::rest(1, 7);
    for d in 0..7 {
        for h in 9..17 {
            sched.set(0, d, h, Assignment::Job(JobType { category: 0, class: 0 }));
        }
    }
    let ctx = SimContext::new(&ins, &em, &im, 21, EvalMode::Emotional).unwrap();
    let (out, trace) = ctx.evaluate_traced(&sched).unwrap();
    let onset = out
        .impairment_violations()
        .next()
        .copied()
        .expect("accumulated weekly hours must trigger severe impairment");
    assert_eq!(
        onset,
        ConstraintViolation::Impairment { employee: 0, day: 3, hour: 12 }
    );
    let onset_end_min = ((3 * 24 + 12 + 1) * 60) as f64;
    let mut before = 0;
    for ev in trace.iter().filter(|t| t.event == "service_start" && t.employee_id == 0) {
        assert!(
            ev.time_min <= onset_end_min,
            "service started at {} after impairment at {}",
            ev.time_min,
            onset_end_min
        );
        before += 1;
    }
    assert!(before > 0, "the employee should have served before impairment");
}

#[test]
fn frozen_mode_never_derives_curves() {
    let ins = generate(&desk_spec(2)).unwrap();
    let (em, im) = crate::nfn::train_default_assessors(8, 5);
    let sched = naive_schedule(&ins, 9..17);
    let frozen = SimContext::new(&ins, &em, &im, 3, EvalMode::Frozen).unwrap();
    let out = frozen.evaluate(&sched);
    assert_eq!(out.curve_derivations, 0);
    assert!(out.impairment_violations().next().is_none());
    let full = SimContext::new(&ins, &em, &im, 3, EvalMode::Emotional).unwrap();
    assert!(full.evaluate(&sched).curve_derivations > 0);
}

#[test]
fn in_flight_request_completes_past_hour_boundary() {
    let ins = tiny_instance(1, 1, &[(8, 2.0)], 0.2);
    let (em, im) = untrained_assessors();
    let mut sched = Schedule::rest(1, 1);
    sched.set(0, 0, 8, Assignment::Job(JobType { category: 0, class: 0 }));
    // One arrival close to the end of hour 8: performance below peak makes
    // the service overrun into the rest hour.
    let seed = (0..5000u64)
        .find(|&s| {
            let ctx = SimContext::new(&ins, &em, &im, s, EvalMode::Emotional).unwrap();
            let a = ctx.arrivals();
            a.len() == 1 && a[0].time > 535.0 && a[0].time < 539.0
        })
        .expect("seed with one late arrival");
    let ctx = SimContext::new(&ins, &em, &im, seed, EvalMode::Emotional).unwrap();
    let (out, trace) = ctx.evaluate_traced(&sched).unwrap();
    assert_eq!(out.total_served, 1);
    assert_eq!(out.in_service_at_end, 0);
    let end = trace.iter().find(|t| t.event == "service_end").unwrap();
    assert!(end.time_min > 540.0, "completion at {}", end.time_min);
}

#[test]
fn static_constraint_checks() {
    let ins = generate(&desk_spec(1)).unwrap();
    let empty = Schedule::rest(ins.m(), ins.horizon_days());
    assert!(check_constraints(&ins, &empty).is_empty());

    let mut sched = Schedule::rest(ins.m(), ins.horizon_days());
    for h in 8..19 {
        sched.set(2, 3, h, Assignment::Job(JobType { category: 0, class: 0 }));
    }
    let v = check_constraints(&ins, &sched);
    assert_eq!(
        v,
        vec![ConstraintViolation::DailyHours { employee: 2, day: 3, hours: 11 }]
    );

    // 31-day windows: exactly the cap is feasible, one hour more is not.
    let mut long_spec = desk_spec(1);
    long_spec.horizon_days = 40;
    let long_ins = generate(&long_spec).unwrap();
    let mut at_cap = Schedule::rest(long_ins.m(), 40);
    // 212 = 6·31 + 26: six hours every day, one extra hour on 26 days.
    for d in 0..31 {
        for h in 8..14 {
            at_cap.set(0, d, h, Assignment::Job(JobType { category: 0, class: 0 }));
        }
        if d < 26 {
            at_cap.set(0, d, 14, Assignment::Job(JobType { category: 0, class: 0 }));
        }
    }
    assert_eq!(at_cap.window_hours(0, 0), 212);
    assert!(check_constraints(&long_ins, &at_cap)
        .iter()
        .all(|v| !matches!(v, ConstraintViolation::WindowHours { .. })));
    at_cap.set(0, 26, 14, Assignment::Job(JobType { category: 0, class: 0 }));
    assert!(check_constraints(&long_ins, &at_cap)
        .iter()
        .any(|v| matches!(v, ConstraintViolation::WindowHours { employee: 0, window_start: 0, hours: 213 })));
}

#[test]
fn dimension_mismatch_rejected() {
    let ins = generate(&desk_spec(1)).unwrap();
    let (em, im) = untrained_assessors();
    let bad = Schedule::rest(3, 2);
    assert!(matches!(
        simulate(&ins, &bad, &em, &im, 0),
        Err(crate::Error::DimensionMismatch { .. })
    ));
}
