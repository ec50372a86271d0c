use std::cmp::Ordering;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampling::{boundary_probe, sample_initial, sample_rng, ShapeFamily, Stream};
use super::{dini_along_solution_at, ClassKPair, LyapunovFn};
use crate::comparison::{check_monotonicity_hypothesis, solve_comparison, MonotonicityReport, SampleBox, ScalarHybridSystem};
use crate::error::{Error, Result};
use crate::fuzzy::{CutRecord, FuzzyVector};
use crate::hybrid::{solve, HybridFuzzySystem, StepMode};
use crate::scalar::Scalar;

pub const VERDICT_SCHEMA_VERSION: u32 = 1;

/// Absolute-plus-relative slack for sampled hypothesis inequalities.
pub const HYPOTHESIS_TOL: f64 = 1e-9;

/// Number of evenly spaced comparison starting values in `[0, a(λ))`, not
/// counting the extra start just below `a(λ)`.
pub const COMPARISON_GRID: usize = 20;

const CLASS_K_POINTS: usize = 201;
const MAX_LISTED: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub family: ShapeFamily,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityQuery {
    pub lambda: f64,
    #[serde(rename = "A")]
    pub bound_a: f64,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub bound_b: Option<f64>,
    #[serde(rename = "T0", default, skip_serializing_if = "Option::is_none")]
    pub settle_time: Option<f64>,
    pub rho: f64,
    pub sampling: Sampling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Practical,
    Quasi,
    Strong,
    Asymptotic,
}

impl Property {
    pub const ALL: [Property; 4] = [Property::Practical, Property::Quasi, Property::Strong, Property::Asymptotic];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome<W> {
    HoldsOnSamples,
    Violated { witness: W },
    NotTested { reason: String },
}

impl<W> Outcome<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Outcome::HoldsOnSamples)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Outcome::Violated { .. })
    }

    pub fn is_not_tested(&self) -> bool {
        matches!(self, Outcome::NotTested { .. })
    }

    fn not_tested(reason: &str) -> Self {
        Outcome::NotTested { reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertySet<W> {
    pub practical: Outcome<W>,
    pub quasi: Outcome<W>,
    pub strong: Outcome<W>,
    pub asymptotic: Outcome<W>,
}

impl<W> PropertySet<W> {
    pub fn get(&self, p: Property) -> &Outcome<W> {
        match p {
            Property::Practical => &self.practical,
            Property::Quasi => &self.quasi,
            Property::Strong => &self.strong,
            Property::Asymptotic => &self.asymptotic,
        }
    }

    fn all_not_tested(reason: &str) -> Self {
        Self {
            practical: Outcome::not_tested(reason),
            quasi: Outcome::not_tested(reason),
            strong: Outcome::not_tested(reason),
            asymptotic: Outcome::not_tested(reason),
        }
    }
}

/// A sampled initial condition whose trajectory reached `d_inf ≥ bound` at `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub sample: usize,
    pub seed: u64,
    pub t: f64,
    pub d_inf: f64,
    pub bound: f64,
    pub u0_norm: f64,
    pub u0: Vec<Vec<CutRecord>>,
}

/// A comparison start `r0` whose solution reached `r ≥ bound` at `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonWitness {
    pub r0: f64,
    pub t: f64,
    pub r: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichViolation {
    pub t: f64,
    pub d_inf: f64,
    pub v: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub samples: usize,
    /// `min(V − b(d), a(d) − V)` over all samples.
    pub min_margin: f64,
    pub violation_count: usize,
    pub violations: Vec<SandwichViolation>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionIiViolation {
    pub sample: usize,
    pub t: f64,
    pub dini: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionIiReport {
    pub checked_points: usize,
    /// `min(g(t, V, ψ_k(V_k)) − D⁺V)` along all sampled trajectories.
    pub min_margin: f64,
    pub violation_count: usize,
    pub violations: Vec<ConditionIiViolation>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzReport {
    /// Only required when the time scale has right-dense points.
    pub required: bool,
    pub declared: Option<f64>,
    pub estimate: f64,
    pub pairs: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub passed: bool,
    pub sandwich: SandwichReport,
    pub condition_ii: ConditionIiReport,
    pub monotonicity: MonotonicityReport,
    pub lipschitz: LipschitzReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inconsistency {
    pub property: Property,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverFailure {
    pub sample: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub schema_version: u32,
    pub mode: StepMode,
    pub horizon: f64,
    pub query: StabilityQuery,
    pub gate_passed: bool,
    pub gate: Vec<GateCheck>,
    pub hypotheses: Option<HypothesisReport>,
    pub comparison_starts: Vec<f64>,
    pub comparison: PropertySet<ComparisonWitness>,
    /// Properties the sampled hypotheses and comparison results imply.
    pub implied: Vec<Property>,
    pub direct: PropertySet<Witness>,
    pub solver_failures: Vec<SolverFailure>,
    pub inconsistencies: Vec<Inconsistency>,
    pub notes: Vec<String>,
}

impl Verdict {
    /// 0 when nothing was violated, 1 on a direct violation, 2 when the gate failed.
    pub fn exit_code(&self) -> i32 {
        if !self.gate_passed {
            2
        } else if Property::ALL.iter().any(|&p| self.direct.get(p).is_violated()) {
            1
        } else {
            0
        }
    }
}

fn gate_check(name: &str, passed: bool, detail: String) -> GateCheck {
    GateCheck {
        name: name.into(),
        passed,
        detail,
    }
}

fn slack(x: f64) -> f64 {
    HYPOTHESIS_TOL * (1.0 + x.abs())
}

/// First index at or after `from` where `values[i] ≥ bound`.
fn first_exceed(values: &[f64], from: usize, bound: f64) -> Option<usize> {
    values.iter().skip(from).position(|&x| x >= bound).map(|p| p + from)
}

/// Per-trajectory exceedance indices for each property, with `None` meaning it holds.
struct Exceed {
    practical: Option<usize>,
    quasi: Option<Option<usize>>,
    asymptotic: Option<Option<usize>>,
}

impl Exceed {
    fn new(values: &[f64], bound_a: f64, bound_b: Option<f64>, settle: Option<usize>) -> Self {
        let practical = first_exceed(values, 0, bound_a);
        let quasi = bound_b.zip(settle).map(|(b, s)| first_exceed(values, s, b));
        let asymptotic = settle.map(|s| practical.or_else(|| first_exceed(values, s, bound_a)));
        Self {
            practical,
            quasi,
            asymptotic,
        }
    }

    /// `(index, bound)` of the first failure for `p`; outer `None` means untestable.
    fn failure(&self, p: Property, bound_a: f64, bound_b: Option<f64>) -> Option<Option<(usize, f64)>> {
        let with_a = |i: Option<usize>| i.map(|i| (i, bound_a));
        let with_b = |i: Option<usize>| i.map(|i| (i, bound_b.unwrap_or(f64::NAN)));
        match p {
            Property::Practical => Some(with_a(self.practical)),
            Property::Quasi => self.quasi.map(with_b),
            Property::Asymptotic => self.asymptotic.map(with_a),
            Property::Strong => self.quasi.map(|q| match (with_a(self.practical), with_b(q)) {
                (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
                (a, b) => a.or(b),
            }),
        }
    }
}

struct SampleRun {
    sample: usize,
    u0: FuzzyVector<f64>,
    norms: Vec<f64>,
    cond_ii: Vec<(f64, f64, f64)>,
}

fn to_f64_vector<T: Scalar>(u: &FuzzyVector<T>) -> Result<FuzzyVector<f64>> {
    let grid = crate::fuzzy::AlphaGrid::new(u.grid().levels().iter().map(|a| a.as_f64()).collect())?;
    FuzzyVector::new(
        u.components()
            .iter()
            .map(|c| {
                crate::fuzzy::FuzzyNumber::from_cuts(
                    grid.clone(),
                    c.lower().iter().map(|x| x.as_f64()).collect(),
                    c.upper().iter().map(|x| x.as_f64()).collect(),
                )
            })
            .collect::<Result<_>>()?,
    )
}

fn witness_from(run: &SampleRun, seed: u64, times: &[f64], i: usize, bound: f64) -> Witness {
    Witness {
        sample: run.sample,
        seed,
        t: times[i],
        d_inf: run.norms[i],
        bound,
        u0_norm: run.u0.norm(),
        u0: run.u0.components().iter().map(|c| c.cut_records()).collect(),
    }
}

fn earliest<W, K: PartialOrd>(items: impl Iterator<Item = (K, W)>) -> Option<W> {
    items
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal))
        .map(|(_, w)| w)
}

fn validate_query(q: &StabilityQuery) -> Result<()> {
    let finite = [q.lambda, q.bound_a, q.rho].iter().all(|x| x.is_finite())
        && q.bound_b.is_none_or(f64::is_finite)
        && q.settle_time.is_none_or(f64::is_finite);
    if !finite {
        return Err(Error::InvalidQuery("non-finite parameter".into()));
    }
    if q.sampling.count == 0 {
        return Err(Error::InvalidQuery("sampling count must be at least 1".into()));
    }
    if !(q.rho > 0.0) {
        return Err(Error::InvalidQuery("rho must be positive".into()));
    }
    Ok(())
}

/// Samples the practical-stability notions on a hybrid fuzzy system and on its
/// comparison system, and checks the hypotheses that link the two.
///
/// Only the given step mode is simulated. A gate failure (parameter ordering,
/// class-K validity, `a(λ) < b(A)`) leaves every property not-tested.
#[allow(clippy::too_many_arguments)]
pub fn check_practical_stability<T: Scalar>(
    sys: &HybridFuzzySystem<T>,
    comp: &ScalarHybridSystem<T>,
    v: &LyapunovFn<T>,
    kpair: &ClassKPair<T>,
    q: &StabilityQuery,
    mode: StepMode,
    horizon: T,
) -> Result<Verdict> {
    validate_query(q)?;
    let ts = sys.time_scale().clone();
    if comp.time_scale().points() != ts.points() || comp.switch_indices() != sys.switch_indices() {
        return Err(Error::InvalidQuery(
            "fuzzy and comparison systems must share the time scale and switch times".into(),
        ));
    }
    let end = ts.index_of(horizon)?;
    let times: Vec<f64> = ts.points()[..=end].iter().map(|t| t.as_f64()).collect();
    let lit = T::lit;

    let mut gate = vec![
        gate_check(
            "0 < lambda < A",
            0.0 < q.lambda && q.lambda < q.bound_a,
            format!("lambda = {}, A = {}", q.lambda, q.bound_a),
        ),
        gate_check(
            "lambda < rho",
            q.lambda < q.rho,
            format!("lambda = {}, rho = {}", q.lambda, q.rho),
        ),
    ];
    if let Some(b) = q.bound_b {
        gate.push(gate_check("B > 0", b > 0.0, format!("B = {b}")));
    }
    let mut settle = None;
    if let Some(t0) = q.settle_time {
        let target = times[0] + t0;
        let idx = ts.index_of(lit(target)).ok().filter(|&i| i <= end);
        gate.push(gate_check(
            "t0 + T0 on the time scale",
            t0 > 0.0 && idx.is_some(),
            format!("t0 + T0 = {target}, horizon = {}", times[end]),
        ));
        settle = idx;
    }
    let k_range = q.bound_a.max(q.rho).max(q.bound_b.unwrap_or(0.0));
    let kcheck = kpair.validate(lit(k_range), CLASS_K_POINTS);
    gate.push(gate_check(
        "a, b class K",
        kcheck.is_ok(),
        kcheck.err().unwrap_or_else(|| format!("checked on {CLASS_K_POINTS} points of [0, {k_range}]")),
    ));
    let a_lambda = kpair.a(lit(q.lambda))?.as_f64();
    let b_a = kpair.b(lit(q.bound_a))?.as_f64();
    gate.push(gate_check(
        "a(lambda) < b(A)",
        a_lambda < b_a,
        format!("a(lambda) = {a_lambda}, b(A) = {b_a}"),
    ));
    let gate_passed = gate.iter().all(|g| g.passed);

    let mut notes = vec![
        format!("solutions sampled from random initial conditions in {mode} mode only"),
        "asymptotic: practical and D(u(t), 0) < A for t >= t0 + T0".to_string(),
    ];
    if q.bound_b.is_none() || q.settle_time.is_none() {
        notes.push("B or T0 missing: quasi, strong and asymptotic not tested".into());
    }

    let mut verdict = Verdict {
        schema_version: VERDICT_SCHEMA_VERSION,
        mode,
        horizon: times[end],
        query: q.clone(),
        gate_passed,
        gate,
        hypotheses: None,
        comparison_starts: Vec::new(),
        comparison: PropertySet::all_not_tested("hypothesis gate failed"),
        implied: Vec::new(),
        direct: PropertySet::all_not_tested("hypothesis gate failed"),
        solver_failures: Vec::new(),
        inconsistencies: Vec::new(),
        notes,
    };
    if !gate_passed {
        return Ok(verdict);
    }

    let base = sys.with_initial(FuzzyVector::zero(sys.grid(), sys.dim())?)?.with_rho(lit(q.rho))?;
    let family = q.sampling.family;
    let seed = q.sampling.seed;
    let count = q.sampling.count;
    let bound_b = q.bound_b;

    // Direct simulation, one independent stream per sample.
    let runs: Vec<std::result::Result<SampleRun, SolverFailure>> = (0..count)
        .into_par_iter()
        .map(|i| -> Result<std::result::Result<SampleRun, SolverFailure>> {
            let u0 = if i == 0 {
                boundary_probe(family, sys.grid(), sys.dim(), lit(q.lambda))?
            } else {
                sample_initial(family, sys.grid(), sys.dim(), lit(q.lambda), &mut sample_rng(seed, Stream::Initial, i as u64))?
            };
            let s = base
                .with_initial(u0.clone())
                .map_err(|e| Error::Config(format!("sampled initial condition outside S(rho): {e}")))?;
            let sol = match solve(&s, mode, horizon) {
                Ok(sol) => sol,
                Err(e) => {
                    return Ok(Err(SolverFailure {
                        sample: i,
                        message: e.to_string(),
                    }))
                }
            };
            let traj = &sol.trajectory;
            let norms: Vec<f64> = traj.norms().into_iter().map(|x| x.as_f64()).collect();
            let vals = (0..=end)
                .map(|j| v.eval(ts.point(j), traj.value(j)))
                .collect::<Result<Vec<T>>>()?;
            let mut cond_ii = Vec::with_capacity(end);
            let mut k = usize::MAX;
            let mut psi_k = T::zero();
            for j in 0..end {
                let seg = sys.segment_at(j);
                if seg != k {
                    k = seg;
                    psi_k = comp.psi(k, vals[sys.switch_indices()[k]])?;
                }
                let dini = dini_along_solution_at(v, traj, j)?;
                let g = comp.g(ts.point(j), vals[j], psi_k)?;
                cond_ii.push((times[j], dini.as_f64(), g.as_f64()));
            }
            Ok(Ok(SampleRun {
                sample: i,
                u0: to_f64_vector(&u0)?,
                norms,
                cond_ii,
            }))
        })
        .collect::<Result<_>>()?;

    let mut ok_runs = Vec::new();
    for r in runs {
        match r {
            Ok(run) => ok_runs.push(run),
            Err(f) => verdict.solver_failures.push(f),
        }
    }

    // Condition (ii) along every sampled trajectory.
    let mut cond = ConditionIiReport {
        checked_points: 0,
        min_margin: f64::INFINITY,
        violation_count: 0,
        violations: Vec::new(),
        passed: true,
    };
    for run in &ok_runs {
        for &(t, dini, g) in &run.cond_ii {
            cond.checked_points += 1;
            let margin = g - dini;
            cond.min_margin = cond.min_margin.min(margin);
            if margin < -slack(g) {
                cond.violation_count += 1;
                cond.violations.push(ConditionIiViolation {
                    sample: run.sample,
                    t,
                    dini,
                    g,
                });
            }
        }
    }
    cond.violations.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.sample.cmp(&b.sample)));
    cond.violations.truncate(MAX_LISTED);
    cond.passed = cond.violation_count == 0 && cond.checked_points > 0;

    // Sandwich on random (t, u) with u in S(A).
    let sandwich_rows = (0..count)
        .into_par_iter()
        .map(|i| -> Result<(f64, SandwichViolation)> {
            let mut rng = sample_rng(seed, Stream::Sandwich, i as u64);
            let j = rng.random_range(0..=end);
            let u = sample_initial(family, sys.grid(), sys.dim(), lit(q.bound_a), &mut rng)?;
            let d = u.norm();
            let (vv, a, b) = (v.eval(ts.point(j), &u)?, kpair.a(d)?, kpair.b(d)?);
            let row = SandwichViolation {
                t: times[j],
                d_inf: d.as_f64(),
                v: vv.as_f64(),
                a: a.as_f64(),
                b: b.as_f64(),
            };
            Ok(((vv - b).min(a - vv).as_f64(), row))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sandwich = SandwichReport {
        samples: count,
        min_margin: f64::INFINITY,
        violation_count: 0,
        violations: Vec::new(),
        passed: true,
    };
    for (margin, row) in sandwich_rows {
        sandwich.min_margin = sandwich.min_margin.min(margin);
        if margin < -slack(row.v) {
            sandwich.violation_count += 1;
            if sandwich.violations.len() < MAX_LISTED {
                sandwich.violations.push(row);
            }
        }
    }
    sandwich.passed = sandwich.violation_count == 0;

    // Monotonicity of the comparison right-hand side.
    let r_max = kpair.a(lit(q.bound_a))?.as_f64().max(b_a);
    let sample_box = SampleBox {
        t_max: times[end],
        r: (0.0, r_max),
        v: (0.0, r_max),
    };
    let mono_seed = sample_rng(seed, Stream::Monotonicity, 0).random::<u64>();
    let monotonicity = check_monotonicity_hypothesis(comp, count, mono_seed, &sample_box)?;

    // Local Lipschitz spot check on nearby pairs in S(rho).
    let ratios = (0..count)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = sample_rng(seed, Stream::Lipschitz, i as u64);
            let j = rng.random_range(0..=end);
            let u = sample_initial(family, sys.grid(), sys.dim(), lit(q.rho), &mut rng)?;
            let du = sample_initial(family, sys.grid(), sys.dim(), lit(0.01 * q.rho), &mut rng)?;
            let w = u.add(&du)?;
            let dist = u.dist(&w)?;
            if !(dist > T::zero()) {
                return Ok(0.0);
            }
            let t = ts.point(j);
            Ok(((v.eval(t, &u)? - v.eval(t, &w)?).abs() / dist).as_f64())
        })
        .collect::<Result<Vec<_>>>()?;
    let estimate = ratios.into_iter().fold(0.0, f64::max);
    let declared = v.lipschitz().map(|l| l.as_f64());
    let lipschitz = LipschitzReport {
        required: ts.has_right_dense(),
        declared,
        estimate,
        pairs: count,
        passed: estimate.is_finite() && declared.is_none_or(|l| estimate <= l + slack(l)),
    };

    let hypotheses = HypothesisReport {
        passed: sandwich.passed && cond.passed && monotonicity.passed() && (!lipschitz.required || lipschitz.passed),
        sandwich,
        condition_ii: cond,
        monotonicity,
        lipschitz,
    };

    // Comparison system on a grid of starts in [0, a(lambda)).
    let mut starts: Vec<f64> = (0..COMPARISON_GRID)
        .map(|j| a_lambda * j as f64 / COMPARISON_GRID as f64)
        .collect();
    starts.push(a_lambda * (1.0 - 1e-12));
    let b_b = bound_b.map(|b| kpair.b(lit(b)).map(|x| x.as_f64())).transpose()?;
    let mut comp_fail: [Vec<((f64, f64), ComparisonWitness)>; 4] = Default::default();
    for &r0 in &starts {
        let c = comp.with_r0(lit(r0))?;
        let values: Vec<f64> = match solve_comparison(&c, horizon) {
            Ok(traj) => traj.values.iter().map(|x| x.as_f64()).collect(),
            Err(Error::BlowUp { t, .. }) => {
                // everything from the blow-up on counts as unbounded
                times.iter().map(|&s| if s < t { 0.0 } else { f64::INFINITY }).collect()
            }
            Err(e) => return Err(e),
        };
        let ex = Exceed::new(&values, b_a, b_b, settle);
        for (slot, p) in Property::ALL.iter().enumerate() {
            if let Some(Some((i, bound))) = ex.failure(*p, b_a, b_b) {
                let w = ComparisonWitness {
                    r0,
                    t: times[i],
                    r: values[i],
                    bound,
                };
                comp_fail[slot].push(((times[i], r0), w));
            }
        }
    }
    let testable = |p: Property| match p {
        Property::Practical => true,
        _ => bound_b.is_some() && settle.is_some(),
    };
    let comparison_outcome = |p: Property, fails: Vec<((f64, f64), ComparisonWitness)>| {
        if !testable(p) {
            return Outcome::not_tested("B and T0 required");
        }
        match earliest(fails.into_iter()) {
            Some(witness) => Outcome::Violated { witness },
            None => Outcome::HoldsOnSamples,
        }
    };
    let [f0, f1, f2, f3] = comp_fail;
    verdict.comparison = PropertySet {
        practical: comparison_outcome(Property::Practical, f0),
        quasi: comparison_outcome(Property::Quasi, f1),
        strong: comparison_outcome(Property::Strong, f2),
        asymptotic: comparison_outcome(Property::Asymptotic, f3),
    };
    verdict.comparison_starts = starts;

    // Direct outcomes from the sampled trajectories.
    let direct_outcome = |p: Property| -> Outcome<Witness> {
        if !testable(p) {
            return Outcome::not_tested("B and T0 required");
        }
        if ok_runs.is_empty() {
            return Outcome::not_tested("no sampled initial condition produced a solution");
        }
        let fails = ok_runs.iter().filter_map(|run| {
            let ex = Exceed::new(&run.norms, q.bound_a, bound_b, settle);
            ex.failure(p, q.bound_a, bound_b)
                .flatten()
                .map(|(i, bound)| ((times[i], run.sample), witness_from(run, seed, &times, i, bound)))
        });
        match earliest(fails) {
            Some(witness) => Outcome::Violated { witness },
            None => Outcome::HoldsOnSamples,
        }
    };
    verdict.direct = PropertySet {
        practical: direct_outcome(Property::Practical),
        quasi: direct_outcome(Property::Quasi),
        strong: direct_outcome(Property::Strong),
        asymptotic: direct_outcome(Property::Asymptotic),
    };

    for p in Property::ALL {
        if hypotheses.passed && verdict.comparison.get(p).holds() {
            verdict.implied.push(p);
            if let Outcome::Violated { witness } = verdict.direct.get(p) {
                verdict.inconsistencies.push(Inconsistency {
                    property: p,
                    witness: witness.clone(),
                });
            }
        }
    }
    verdict.hypotheses = Some(hypotheses);
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fuzzy::{AlphaGrid, FuzzyVector};
    use crate::hybrid::{build_example_system, RhsFn, SwitchFn};
    use crate::timescale::TimeScale;

    fn query(lambda: f64, a: f64, b: Option<f64>, t0: Option<f64>, family: ShapeFamily, count: usize) -> StabilityQuery {
        StabilityQuery {
            lambda,
            bound_a: a,
            bound_b: b,
            settle_time: t0,
            rho: 10.0,
            sampling: Sampling { count, seed: 42, family },
        }
    }

    fn halving() -> (HybridFuzzySystem<f64>, ScalarHybridSystem<f64>) {
        let grid = AlphaGrid::default();
        let ts = Arc::new(TimeScale::integer(10).unwrap());
        let ts_f = ts.clone();
        let rhs: Arc<RhsFn<f64>> = Arc::new(move |t, u, _l| Ok(u.scale(-1.0 / (1.0 + ts_f.mu(t)?))));
        let sw: Arc<SwitchFn<f64>> = Arc::new(|_k, _t, u| Ok(u.clone()));
        let u0 = FuzzyVector::crisp(&[0.5], &grid).unwrap();
        let sys = HybridFuzzySystem::new(ts.clone(), &[0.0], rhs, sw, 10.0, u0).unwrap();
        let ts_g = ts.clone();
        let comp = ScalarHybridSystem::new(
            ts,
            &[0.0],
            Arc::new(move |t, r, _v| Ok(-r / (1.0 + ts_g.mu(t)?))),
            Arc::new(|_k, v| Ok(v)),
            0.0,
        )
        .unwrap();
        (sys, comp)
    }

    fn example() -> (HybridFuzzySystem<f64>, ScalarHybridSystem<f64>) {
        let sys = build_example_system(&AlphaGrid::default(), 1, 5).unwrap();
        let ts = sys.time_scale().clone();
        let ts_g = ts.clone();
        let comp = ScalarHybridSystem::new(
            ts,
            &sys.switch_times(),
            Arc::new(move |t, w, wk| Ok((w + wk) / (1.0 + ts_g.mu(t)?))),
            Arc::new(|_k, v| Ok(v)),
            0.0,
        )
        .unwrap();
        (sys, comp)
    }

    #[test]
    fn halving_is_stable_in_every_sense() {
        let (sys, comp) = halving();
        let q = query(1.0, 1.5, Some(0.1), Some(4.0), ShapeFamily::Crisp, 200);
        let v = check_practical_stability(&sys, &comp, &LyapunovFn::norm(), &ClassKPair::identity(), &q, StepMode::Expansive, 10.0).unwrap();
        assert!(v.gate_passed);
        assert!(v.hypotheses.as_ref().unwrap().passed, "{:?}", v.hypotheses);
        for p in Property::ALL {
            assert!(v.direct.get(p).holds(), "{p:?}: {:?}", v.direct.get(p));
            assert!(v.comparison.get(p).holds(), "{p:?}");
        }
        assert_eq!(v.implied.len(), 4);
        assert!(v.inconsistencies.is_empty());
        assert_eq!(v.exit_code(), 0);
    }

    #[test]
    fn example_violates_with_boundary_witness() {
        let (sys, comp) = example();
        let q = query(1.0, 2.0, None, None, ShapeFamily::Triangular, 200);
        let v = check_practical_stability(&sys, &comp, &LyapunovFn::norm(), &ClassKPair::identity(), &q, StepMode::Expansive, 10.0).unwrap();
        let Outcome::Violated { witness } = &v.direct.practical else {
            panic!("{:?}", v.direct.practical)
        };
        assert_eq!(witness.t, 2.0);
        assert!((witness.d_inf - 2.25).abs() < 1e-9);
        assert!(v.comparison.practical.is_violated());
        assert!(v.hypotheses.as_ref().unwrap().passed);
        assert!(v.direct.quasi.is_not_tested());
        assert!(v.inconsistencies.is_empty());
        assert_eq!(v.exit_code(), 1);
    }

    #[test]
    fn gate_failure_tests_nothing() {
        let (sys, comp) = halving();
        let double_a = ClassKPair::new(Arc::new(|x: f64| Ok(2.0 * x)), Arc::new(Ok));
        let q = query(1.0, 1.5, None, None, ShapeFamily::Crisp, 10);
        let v = check_practical_stability(&sys, &comp, &LyapunovFn::norm(), &double_a, &q, StepMode::Expansive, 10.0).unwrap();
        assert!(!v.gate_passed);
        assert!(v.hypotheses.is_none());
        assert!(Property::ALL.iter().all(|&p| v.direct.get(p).is_not_tested()));
        assert_eq!(v.exit_code(), 2);

        let bad = query(1.0, 1.0, None, None, ShapeFamily::Crisp, 10);
        let v = check_practical_stability(&sys, &comp, &LyapunovFn::norm(), &ClassKPair::identity(), &bad, StepMode::Expansive, 10.0).unwrap();
        assert_eq!(v.exit_code(), 2);

        let off_scale = query(0.5, 1.0, Some(0.1), Some(20.0), ShapeFamily::Crisp, 10);
        let v = check_practical_stability(&sys, &comp, &LyapunovFn::norm(), &ClassKPair::identity(), &off_scale, StepMode::Expansive, 10.0).unwrap();
        assert_eq!(v.exit_code(), 2);
    }

    #[test]
    fn verdict_is_deterministic() {
        let (sys, comp) = example();
        let q = query(1.0, 2.0, Some(1.0), Some(3.0), ShapeFamily::Mixed, 64);
        let run = || {
            let v = check_practical_stability(&sys, &comp, &LyapunovFn::norm(), &ClassKPair::identity(), &q, StepMode::Expansive, 10.0).unwrap();
            serde_json::to_string(&v).unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn contractive_failures_are_recorded() {
        let (sys, comp) = example();
        let q = query(1.0, 2.0, None, None, ShapeFamily::Triangular, 8);
        let v = check_practical_stability(&sys, &comp, &LyapunovFn::norm(), &ClassKPair::identity(), &q, StepMode::Contractive, 10.0).unwrap();
        assert!(!v.solver_failures.is_empty());
    }
}
