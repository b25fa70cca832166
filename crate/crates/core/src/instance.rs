//! Problem instances: data model, validation, JSON IO, and a synthetic
//! generator calibrated to bank-call-center scale.
//!
//! An instance fixes `m` employees, `N` business categories × 2 classes
//! (0 = easy, 1 = hard), a horizon of `D` days, hourly arrival rates per job
//! type, per-type service parameters, and the global labor/objective
//! parameters. Instances are immutable after load/generate and freely shared
//! across threads.

use serde::{Deserialize, Serialize};

use crate::defaults::Defaults;
use crate::nfn::StressFactors;
use crate::perf::{CurveBaselines, EmotionalState};
use crate::rng;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Hours of the day during which requests arrive (08:00–20:00).
pub const ACTIVE_HOURS: std::ops::Range<usize> = 8..20;

/// One of the `N×2` job types: a business category and a difficulty class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JobType {
    /// Category index in `0..N`.
    pub category: usize,
    /// Class index: 0 = easy, 1 = hard.
    pub class: usize,
}

/// Service parameters of one job type. Times are minutes; `cancel_coeff` is
/// the per-minute patience parameter of the abandonment law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JobParams {
    pub mean_service_time: f64,
    pub weight: f64,
    pub wait_threshold: f64,
    pub cancel_coeff: f64,
}

/// Per-category `{easy, hard}` parameter pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JobParamsPair {
    pub easy: JobParams,
    pub hard: JobParams,
}

impl JobParamsPair {
    pub fn class(&self, l: usize) -> &JobParams {
        if l == 0 {
            &self.easy
        } else {
            &self.hard
        }
    }
}

/// Static description of one employee.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmployeeProfile {
    pub id: usize,
    /// `skills[category][class]` in `[0,1]`.
    pub skills: Vec<[f64; 2]>,
    /// Factor values at horizon start.
    pub factors: StressFactors,
    /// Induction-test grades for the five emotional states.
    pub baseline_emotions: EmotionalState,
}

/// Global problem parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Globals {
    /// Maximum daily working hours (labor law).
    pub daily_cap_hours: u32,
    /// Maximum working hours in any 31-day window.
    pub monthly_cap_hours: u32,
    /// Objective weight on cancellations, strictly greater than 1.
    pub cancel_weight: f64,
    /// Average daily working hours used by staffing heuristics.
    pub avg_daily_hours: f64,
    /// Curve baselines per class: `[easy, hard]`.
    pub curve_baselines: [CurveBaselines; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub generator_seed: Option<u64>,
}

/// A complete problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub meta: Meta,
    pub globals: Globals,
    /// `job_params[category]`.
    pub job_params: Vec<JobParamsPair>,
    pub employees: Vec<EmployeeProfile>,
    n_categories: usize,
    horizon_days: usize,
    /// Dense `[j][l][h][d]` rates, requests/hour.
    rates: Vec<f64>,
}

impl Instance {
    pub fn new(
        meta: Meta,
        globals: Globals,
        job_params: Vec<JobParamsPair>,
        employees: Vec<EmployeeProfile>,
        n_categories: usize,
        horizon_days: usize,
        rates: Vec<f64>,
    ) -> Result<Self> {
        if rates.len() != n_categories * 2 * 24 * horizon_days {
            return Err(Error::InvalidInstance(format!(
                "arrival_rates length {} does not match dims {}×2×24×{}",
                rates.len(),
                n_categories,
                horizon_days
            )));
        }
        if job_params.len() != n_categories {
            return Err(Error::InvalidInstance(format!(
                "job_params length {} does not match {} categories",
                job_params.len(),
                n_categories
            )));
        }
        Ok(Self { meta, globals, job_params, employees, n_categories, horizon_days, rates })
    }

    pub fn m(&self) -> usize {
        self.employees.len()
    }

    pub fn n_categories(&self) -> usize {
        self.n_categories
    }

    pub fn horizon_days(&self) -> usize {
        self.horizon_days
    }

    #[inline]
    fn rate_idx(&self, j: usize, l: usize, h: usize, d: usize) -> usize {
        ((j * 2 + l) * 24 + h) * self.horizon_days + d
    }

    /// Arrival rate of job type `(j,l)` in hour `h` of day `d`, requests/hour.
    #[inline]
    pub fn rate(&self, j: usize, l: usize, h: usize, d: usize) -> f64 {
        self.rates[self.rate_idx(j, l, h, d)]
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Expected number of arrivals of `(j,l)` on day `d`.
    pub fn expected_daily_arrivals(&self, j: usize, l: usize, d: usize) -> f64 {
        (0..24).map(|h| self.rate(j, l, h, d)).sum()
    }

    /// All invariant violations; empty iff the instance is well-formed.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.employees.is_empty() {
            v.push("instance has no employees".into());
        }
        if self.n_categories == 0 {
            v.push("n_categories must be at least 1".into());
        }
        if self.horizon_days == 0 {
            v.push("horizon_days must be at least 1".into());
        }
        if !(self.globals.cancel_weight > 1.0) {
            v.push(format!(
                "globals.cancel_weight must exceed 1 (got {})",
                self.globals.cancel_weight
            ));
        }
        if self.globals.daily_cap_hours > 24 {
            v.push(format!(
                "globals.daily_cap_hours must be at most 24 (got {})",
                self.globals.daily_cap_hours
            ));
        }
        if !(self.globals.avg_daily_hours > 0.0) {
            v.push("globals.avg_daily_hours must be positive".into());
        }
        for (c, base) in self.globals.curve_baselines.iter().enumerate() {
            for (name, val) in
                [("t_rise", base.t_rise), ("t_peak", base.t_peak), ("t_fall", base.t_fall)]
            {
                if !(val > 0.0) {
                    v.push(format!("curve_baselines[{c}].{name} must be positive (got {val})"));
                }
            }
        }
        for (j, pair) in self.job_params.iter().enumerate() {
            for l in 0..2 {
                let p = pair.class(l);
                for (name, val) in [
                    ("mean_service_time", p.mean_service_time),
                    ("weight", p.weight),
                    ("wait_threshold", p.wait_threshold),
                    ("cancel_coeff", p.cancel_coeff),
                ] {
                    if !(val > 0.0) {
                        v.push(format!(
                            "job_params[{j}][{l}].{name} must be positive (got {val})"
                        ));
                    }
                }
            }
        }
        for j in 0..self.n_categories {
            for l in 0..2 {
                for h in 0..24 {
                    for d in 0..self.horizon_days {
                        let r = self.rate(j, l, h, d);
                        if !(r >= 0.0) {
                            v.push(format!(
                                "arrival_rates[j={j}][l={l}][h={h}][d={d}] must be nonnegative (got {r})"
                            ));
                        }
                    }
                }
            }
        }
        for e in &self.employees {
            if e.skills.len() != self.n_categories {
                v.push(format!(
                    "employee {} has {} skill rows, expected {}",
                    e.id,
                    e.skills.len(),
                    self.n_categories
                ));
                continue;
            }
            for (j, row) in e.skills.iter().enumerate() {
                for (l, &s) in row.iter().enumerate() {
                    if !(0.0..=1.0).contains(&s) {
                        v.push(format!(
                            "employee {id} skill[{j}][{l}] must be in [0,1] (got {s})",
                            id = e.id
                        ));
                    }
                }
            }
            v.extend(e.factors.violations(&format!("employee {} factors.", e.id)));
        }
        v
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let file = InstanceFile::from(self.clone());
        let json = serde_json::to_string_pretty(&file).expect("instance serializes");
        crate::io::write_atomic(path, json.as_bytes())
    }

    pub fn load(path: &std::path::Path) -> Result<Instance> {
        Ok(Self::load_with_warnings(path)?.0)
    }

    /// Loads an instance, reporting unknown fields as warnings (they are
    /// ignored for forward compatibility).
    pub fn load_with_warnings(path: &std::path::Path) -> Result<(Instance, Vec<String>)> {
        let text = crate::io::read_to_string(path)?;
        let mut warnings = Vec::new();
        let mut de = serde_json::Deserializer::from_str(&text);
        let file: InstanceFile = serde_ignored::deserialize(&mut de, |ignored| {
            warnings.push(format!("ignoring unknown field `{ignored}`"));
        })
        .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
        de.end().map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                found: file.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        let instance = file.into_instance()?;
        Ok((instance, warnings))
    }
}

#[derive(Serialize, Deserialize)]
struct ArrivalRates {
    /// `[N, 2, 24, D]`
    dims: [usize; 4],
    /// Dense values in `j, l, h, d` order, requests/hour.
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    schema_version: u32,
    meta: Meta,
    globals: Globals,
    job_params: Vec<JobParamsPair>,
    arrival_rates: ArrivalRates,
    employees: Vec<EmployeeProfile>,
}

impl From<Instance> for InstanceFile {
    fn from(ins: Instance) -> Self {
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            meta: ins.meta,
            globals: ins.globals,
            job_params: ins.job_params,
            arrival_rates: ArrivalRates {
                dims: [ins.n_categories, 2, 24, ins.horizon_days],
                data: ins.rates,
            },
            employees: ins.employees,
        }
    }
}

impl InstanceFile {
    fn into_instance(self) -> Result<Instance> {
        let [n, two, hours, d] = self.arrival_rates.dims;
        if two != 2 || hours != 24 {
            return Err(Error::InvalidInstance(format!(
                "arrival_rates dims must be [N, 2, 24, D], got {:?}",
                self.arrival_rates.dims
            )));
        }
        Instance::new(
            self.meta,
            self.globals,
            self.job_params,
            self.employees,
            n,
            d,
            self.arrival_rates.data,
        )
    }
}

/// Parameters of the synthetic generator. Rates are the mean total arrivals
/// per active hour across all categories of a class.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GenSpec {
    pub m: usize,
    pub n_categories: usize,
    pub horizon_days: usize,
    pub mean_easy_rate: f64,
    pub mean_hard_rate: f64,
    /// Target mean initial performance over employees and job types.
    pub mean_init_perf: f64,
    /// Mean abandonment coefficient, per minute.
    pub mean_cancel_coeff: f64,
    pub seed: u64,
}

impl GenSpec {
    fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidGenSpec(msg.to_string()));
        if self.m < 1 {
            return bad("m must be at least 1");
        }
        if self.n_categories < 1 {
            return bad("n_categories must be at least 1");
        }
        if self.horizon_days < 1 {
            return bad("horizon_days must be at least 1");
        }
        if !(self.mean_easy_rate > 0.0) || !(self.mean_hard_rate > 0.0) {
            return bad("arrival rates must be positive");
        }
        if !(self.mean_init_perf > 0.0 && self.mean_init_perf <= 1.0) {
            return bad("mean_init_perf must be in (0,1]");
        }
        if !(self.mean_cancel_coeff > 0.0) {
            return bad("mean_cancel_coeff must be positive");
        }
        Ok(())
    }
}

/// Two-peak intraday arrival profile over the active hours, normalized so the
/// mean over active hours is 1. Zero outside 08:00–20:00.
fn intraday_shape() -> [f64; 24] {
    let mut shape = [0.0; 24];
    let mut sum = 0.0;
    for h in ACTIVE_HOURS {
        let x = h as f64;
        let morning = 1.1 * (-(x - 10.0) * (x - 10.0) / (2.0 * 1.8 * 1.8)).exp();
        let afternoon = 0.9 * (-(x - 15.0) * (x - 15.0) / (2.0 * 2.2 * 2.2)).exp();
        shape[h] = 0.55 + morning + afternoon;
        sum += shape[h];
    }
    let active = ACTIVE_HOURS.len() as f64;
    for h in ACTIVE_HOURS {
        shape[h] *= active / sum;
    }
    shape
}

/// Generates an instance. Deterministic in `spec.seed`: the same spec yields
/// byte-identical files.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    use rand::Rng;
    spec.check()?;
    let d = Defaults::get();
    let (n, days) = (spec.n_categories, spec.horizon_days);

    // Category shares of the total rate, bounded away from zero.
    let mut r = rng::stream(spec.seed, &[rng::tag("gen-shares")]);
    let mut shares: Vec<f64> = (0..n).map(|_| r.random_range(0.5..1.5)).collect();
    let total: f64 = shares.iter().sum();
    shares.iter_mut().for_each(|s| *s /= total);

    let shape = intraday_shape();
    let mut day_rng = rng::stream(spec.seed, &[rng::tag("gen-days")]);
    let mut rates = vec![0.0; n * 2 * 24 * days];
    for l in 0..2 {
        let class_rate = if l == 0 { spec.mean_easy_rate } else { spec.mean_hard_rate };
        for day in 0..days {
            let day_factor = day_rng.random_range(0.9..1.1);
            for (j, share) in shares.iter().enumerate() {
                for h in ACTIVE_HOURS {
                    rates[((j * 2 + l) * 24 + h) * days + day] =
                        class_rate * share * shape[h] * day_factor;
                }
            }
        }
    }

    let mut param_rng = rng::stream(spec.seed, &[rng::tag("gen-params")]);
    let job_params: Vec<JobParamsPair> = (0..n)
        .map(|_| {
            let mut class = |l: usize| JobParams {
                mean_service_time: d.mean_service_time.class(l),
                weight: d.job_weight.class(l),
                wait_threshold: d.wait_threshold.class(l),
                cancel_coeff: spec.mean_cancel_coeff * param_rng.random_range(0.85..1.15),
            };
            JobParamsPair { easy: class(0), hard: class(1) }
        })
        .collect();

    let mut emp_rng = rng::stream(spec.seed, &[rng::tag("gen-employees")]);
    let mut employees: Vec<EmployeeProfile> = (0..spec.m)
        .map(|id| {
            let hard_frac = emp_rng.random_range(0.15..0.5);
            let mut factors = crate::nfn::random_factors(&mut emp_rng, hard_frac);
            // The horizon starts at midnight: no hours worked today yet.
            factors.t_day = 0.0;
            factors.t_day_hard = 0.0;
            // Screened workforce: negative states graded low, positive high.
            let depression0 = emp_rng.random_range(0..2) as f64 + 1.0;
            let activation0 = emp_rng.random_range(0..2) as f64 + 4.0;
            let anxiety0 = emp_rng.random_range(0..2) as f64 + 1.0;
            let concentration0 = emp_rng.random_range(0..2) as f64 + 4.0;
            let endurance0 = emp_rng.random_range(0..2) as f64 + 4.0;
            let baseline_emotions = EmotionalState::new(
                depression0,
                activation0,
                anxiety0,
                concentration0,
                endurance0,
            );
            let skills: Vec<[f64; 2]> = (0..n)
                .map(|_| [emp_rng.random_range(0.55..0.95), emp_rng.random_range(0.5..0.9)])
                .collect();
            EmployeeProfile { id, skills, factors, baseline_emotions }
        })
        .collect();

    // Scale skills so the mean initial performance Q·U over employees and job
    // types (taking baseline grades as the initial emotional state) matches
    // the target. Two passes absorb most of the clamping bias.
    for _ in 0..2 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for e in &employees {
            let q = (e.baseline_emotions.activation / 6.0).sqrt();
            let u_factor = (6.0 - e.baseline_emotions.depression) / 5.0;
            for row in &e.skills {
                for &s in row {
                    sum += q * u_factor * s;
                    count += 1;
                }
            }
        }
        let mean = sum / count as f64;
        let scale = spec.mean_init_perf / mean;
        for e in &mut employees {
            for row in &mut e.skills {
                for s in row.iter_mut() {
                    *s = (*s * scale).clamp(0.02, 1.0);
                }
            }
        }
    }

    Instance::new(
        Meta {
            name: format!("synthetic-m{}-n{}-d{}", spec.m, n, days),
            generator_seed: Some(spec.seed),
        },
        Globals {
            daily_cap_hours: d.daily_cap_hours,
            monthly_cap_hours: d.monthly_cap_hours,
            cancel_weight: d.cancel_weight,
            avg_daily_hours: d.avg_daily_hours,
            curve_baselines: [d.curve_baselines.easy, d.curve_baselines.hard],
        },
        job_params,
        employees,
        n,
        days,
        rates,
    )
}

/// The small instance used throughout tests and examples: 20 employees, two
/// categories, one week, 90 easy + 35 hard requests per active hour.
pub fn desk_spec(seed: u64) -> GenSpec {
    GenSpec {
        m: 20,
        n_categories: 2,
        horizon_days: 7,
        mean_easy_rate: 90.0,
        mean_hard_rate: 35.0,
        mean_init_perf: 0.6,
        mean_cancel_coeff: 0.2,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_instance_is_valid() {
        let ins = generate(&desk_spec(1)).unwrap();
        assert_eq!(ins.m(), 20);
        assert_eq!(ins.n_categories(), 2);
        assert_eq!(ins.horizon_days(), 7);
        assert!(ins.validate().is_empty(), "{:?}", ins.validate());
    }

    #[test]
    fn generation_is_deterministic_and_seed_sensitive() {
        let a = generate(&desk_spec(5)).unwrap();
        let b = generate(&desk_spec(5)).unwrap();
        assert_eq!(a, b);
        let ja = serde_json::to_string(&InstanceFile::from(a.clone())).unwrap();
        let jb = serde_json::to_string(&InstanceFile::from(b)).unwrap();
        assert_eq!(ja, jb);
        let c = generate(&desk_spec(6)).unwrap();
        assert_ne!(a, c);
        // Structural counts survive a seed change.
        assert_eq!(a.m(), c.m());
        assert_eq!(a.n_categories(), c.n_categories());
        assert_eq!(a.horizon_days(), c.horizon_days());
    }

    #[test]
    fn expected_rates_match_targets() {
        let spec = GenSpec {
            m: 327,
            n_categories: 6,
            horizon_days: 30,
            mean_easy_rate: 1535.0,
            mean_hard_rate: 620.0,
            mean_init_perf: 0.75,
            mean_cancel_coeff: 0.2,
            seed: 11,
        };
        let ins = generate(&spec).unwrap();
        for (l, target) in [(0, 1535.0), (1, 620.0)] {
            let mut sum = 0.0;
            let mut cells = 0usize;
            for d in 0..30 {
                for h in ACTIVE_HOURS {
                    sum += (0..6).map(|j| ins.rate(j, l, h, d)).sum::<f64>();
                    cells += 1;
                }
            }
            let mean = sum / cells as f64;
            assert!(
                (mean / target - 1.0).abs() < 0.03,
                "class {l}: mean {mean} vs target {target}"
            );
        }
        // No arrivals outside business hours.
        for h in (0..8).chain(20..24) {
            assert_eq!(ins.rate(0, 0, h, 0), 0.0);
        }
    }

    #[test]
    fn initial_performance_calibration() {
        for (spec, target) in [
            (desk_spec(3), 0.6),
            (
                GenSpec {
                    m: 327,
                    n_categories: 6,
                    horizon_days: 5,
                    mean_easy_rate: 1535.0,
                    mean_hard_rate: 620.0,
                    mean_init_perf: 0.75,
                    mean_cancel_coeff: 0.2,
                    seed: 3,
                },
                0.75,
            ),
        ] {
            let ins = generate(&spec).unwrap();
            let mut sum = 0.0;
            let mut count = 0;
            for e in &ins.employees {
                let q = (e.baseline_emotions.activation / 6.0).sqrt();
                let u_factor = (6.0 - e.baseline_emotions.depression) / 5.0;
                for row in &e.skills {
                    for &s in row {
                        sum += q * u_factor * s;
                        count += 1;
                    }
                }
            }
            let mean = sum / count as f64;
            assert!(
                (mean - target).abs() < 0.05,
                "mean initial performance {mean} vs target {target}"
            );
        }
    }

    #[test]
    fn infeasible_specs_rejected() {
        let mut s = desk_spec(1);
        s.horizon_days = 0;
        assert!(matches!(generate(&s), Err(Error::InvalidGenSpec(_))));
        let mut s = desk_spec(1);
        s.mean_easy_rate = -1.0;
        assert!(generate(&s).is_err());
    }

    #[test]
    fn validate_reports_named_violations() {
        let mut ins = generate(&desk_spec(1)).unwrap();
        assert!(ins.validate().is_empty());

        ins.globals.cancel_weight = 1.0;
        let v = ins.validate();
        assert!(v.iter().any(|s| s.contains("cancel_weight must exceed 1")), "{v:?}");

        ins.globals.cancel_weight = 2.0;
        let idx = ins.rate_idx(1, 0, 9, 3);
        ins.rates[idx] = -0.5;
        let v = ins.validate();
        assert!(
            v.iter().any(|s| s.contains("[j=1][l=0][h=9][d=3]")),
            "violation should name indices: {v:?}"
        );
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("desk.json");
        let ins = generate(&desk_spec(7)).unwrap();
        ins.save(&path).unwrap();
        let (loaded, warnings) = Instance::load_with_warnings(&path).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(ins, loaded);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.json");
        let ins = generate(&desk_spec(7)).unwrap();
        ins.save(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(matches!(Instance::load(&path), Err(Error::Parse { .. })));
    }

    #[test]
    fn unknown_fields_warn_and_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("extra.json");
        let ins = generate(&desk_spec(7)).unwrap();
        ins.save(&path).unwrap();
        let mut value: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        value["future_field"] = serde_json::json!({"x": 1});
        value["globals"]["new_knob"] = serde_json::json!(3.5);
        std::fs::write(&path, serde_json::to_string(&value).unwrap()).unwrap();
        let (loaded, warnings) = Instance::load_with_warnings(&path).unwrap();
        assert_eq!(ins, loaded);
        assert_eq!(warnings.len(), 2, "{warnings:?}");
        assert!(warnings.iter().any(|w| w.contains("future_field")));
        assert!(warnings.iter().any(|w| w.contains("globals.new_knob")));
    }

    #[test]
    fn schema_version_mismatch_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v2.json");
        let ins = generate(&desk_spec(7)).unwrap();
        ins.save(&path).unwrap();
        let mut value: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        value["schema_version"] = serde_json::json!(2);
        std::fs::write(&path, serde_json::to_string(&value).unwrap()).unwrap();
        assert!(matches!(
            Instance::load(&path),
            Err(Error::SchemaVersion { found: 2, expected: 1 })
        ));
    }
}
