//! Lyapunov functions, comparison bounds and practical-stability checks.

mod sampling;
mod verdict;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use sampling::{boundary_probe, sample_initial, sample_rng, ShapeFamily, Stream};
pub use verdict::{
    check_practical_stability, ComparisonWitness, ConditionIiReport, ConditionIiViolation, GateCheck,
    HypothesisReport, Inconsistency, LipschitzReport, Outcome, Property, PropertySet, SandwichReport,
    SandwichViolation, Sampling, SolverFailure, StabilityQuery, Verdict, Witness, COMPARISON_GRID, HYPOTHESIS_TOL,
    VERDICT_SCHEMA_VERSION,
};

use crate::comparison::ScalarTrajectory;
use crate::error::{Error, Result};
use crate::fuzzy::FuzzyVector;
use crate::hukuhara::FuzzyTrajectory;
use crate::scalar::Scalar;

pub type VFn<T> = dyn Fn(T, &FuzzyVector<T>) -> Result<T> + Send + Sync;
pub type KFn<T> = dyn Fn(T) -> Result<T> + Send + Sync;

/// `V(t, u) ≥ 0`, optionally with a declared local Lipschitz constant in `u`.
#[derive(Clone)]
pub struct LyapunovFn<T> {
    f: Arc<VFn<T>>,
    lipschitz: Option<T>,
}

impl<T: Scalar> fmt::Debug for LyapunovFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LyapunovFn")
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> LyapunovFn<T> {
    pub fn new(f: Arc<VFn<T>>) -> Self {
        Self { f, lipschitz: None }
    }

    /// `V(t, u) = D_∞(u, 0̃)`, 1-Lipschitz.
    pub fn norm() -> Self {
        Self {
            f: Arc::new(|_t, u| Ok(u.norm())),
            lipschitz: Some(T::one()),
        }
    }

    pub fn with_lipschitz(mut self, constant: T) -> Self {
        self.lipschitz = Some(constant);
        self
    }

    pub fn lipschitz(&self) -> Option<T> {
        self.lipschitz
    }

    pub fn eval(&self, t: T, u: &FuzzyVector<T>) -> Result<T> {
        (self.f)(t, u)
    }
}

/// Lower and upper class-K bounds `b(D_∞(u, 0̃)) ≤ V(t, u) ≤ a(D_∞(u, 0̃))`.
#[derive(Clone)]
pub struct ClassKPair<T> {
    a: Arc<KFn<T>>,
    b: Arc<KFn<T>>,
}

impl<T: Scalar> fmt::Debug for ClassKPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClassKPair").finish_non_exhaustive()
    }
}

impl<T: Scalar> ClassKPair<T> {
    pub fn new(a: Arc<KFn<T>>, b: Arc<KFn<T>>) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self::new(Arc::new(Ok), Arc::new(Ok))
    }

    pub fn a(&self, x: T) -> Result<T> {
        (self.a)(x)
    }

    pub fn b(&self, x: T) -> Result<T> {
        (self.b)(x)
    }

    /// Checks `f(0) = 0` and strict increase on `points` uniform samples of `[0, upto]`.
    pub fn validate(&self, upto: T, points: usize) -> std::result::Result<(), String> {
        for (name, f) in [("a", &self.a), ("b", &self.b)] {
            validate_class_k(name, f.as_ref(), upto, points.max(2))?;
        }
        Ok(())
    }
}

fn validate_class_k<T: Scalar>(name: &str, f: &KFn<T>, upto: T, points: usize) -> std::result::Result<(), String> {
    let eval = |x: T| f(x).map_err(|e| format!("{name}({x}): {e}"));
    let f0 = eval(T::zero())?;
    if !(f0.abs() <= T::lit(1e-12)) {
        return Err(format!("{name}(0) = {f0}, expected 0"));
    }
    let mut prev = f0;
    for j in 1..points {
        let x = upto * T::lit(j as f64 / (points - 1) as f64);
        let y = eval(x)?;
        if !(y > prev) {
            return Err(format!("{name} is not strictly increasing near x = {x}"));
        }
        prev = y;
    }
    Ok(())
}

/// Upper Δ-Dini derivative of `t ↦ V(t, u(t))` at stored point `t`.
pub fn dini_along_solution<T: Scalar>(v: &LyapunovFn<T>, traj: &FuzzyTrajectory<T>, t: T) -> Result<T> {
    let ts = traj.time_scale();
    let i = ts.index_of(t)?;
    dini_along_solution_at(v, traj, i)
}

pub(crate) fn dini_along_solution_at<T: Scalar>(v: &LyapunovFn<T>, traj: &FuzzyTrajectory<T>, i: usize) -> Result<T> {
    let ts = traj.time_scale();
    if i + 1 >= traj.len() {
        return Err(Error::NoSuccessor { t: ts.point(i).as_f64() });
    }
    let end = (i + crate::timescale::DINI_FORWARD_SAMPLES).min(traj.len() - 1);
    let mut values = vec![T::zero(); end + 1];
    for (j, slot) in values.iter_mut().enumerate().skip(i) {
        *slot = v.eval(ts.point(j), traj.value(j))?;
    }
    ts.upper_dini_sampled(&values, i)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub t: f64,
    pub segment: usize,
    pub v: f64,
    pub r: f64,
    /// `r(t) − V(t, u(t))`
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonBoundReport {
    pub tol: f64,
    /// `V(t₀, u₀) ≤ r₀ + tol`; when false the per-point check is skipped.
    pub precondition_met: bool,
    pub v0: f64,
    pub r0: f64,
    pub approximate: bool,
    pub rows: Vec<BoundRow>,
    /// Indices into `rows` with `V > r + tol`.
    pub violations: Vec<usize>,
}

impl ComparisonBoundReport {
    pub fn passed(&self) -> bool {
        self.precondition_met && self.violations.is_empty()
    }
}

/// Checks `V(t, u(t)) ≤ r(t) + tol` at every common point.
pub fn verify_comparison_bound<T: Scalar>(
    v: &LyapunovFn<T>,
    fuzzy_traj: &FuzzyTrajectory<T>,
    scalar_traj: &ScalarTrajectory<T>,
    tol: T,
) -> Result<ComparisonBoundReport> {
    let times = fuzzy_traj.times();
    if scalar_traj.len() != fuzzy_traj.len() || scalar_traj.times[..] != times[..scalar_traj.len().min(times.len())] {
        return Err(Error::InvalidQuery("fuzzy and scalar trajectories are on different grids".into()));
    }
    let v0 = v.eval(times[0], fuzzy_traj.value(0))?;
    let r0 = scalar_traj.values[0];
    let mut report = ComparisonBoundReport {
        tol: tol.as_f64(),
        precondition_met: v0 <= r0 + tol,
        v0: v0.as_f64(),
        r0: r0.as_f64(),
        approximate: scalar_traj.approximate,
        rows: Vec::new(),
        violations: Vec::new(),
    };
    if !report.precondition_met {
        return Ok(report);
    }
    for (i, &t) in times.iter().enumerate() {
        let vi = v.eval(t, fuzzy_traj.value(i))?;
        let ri = scalar_traj.values[i];
        if vi > ri + tol {
            report.violations.push(i);
        }
        report.rows.push(BoundRow {
            t: t.as_f64(),
            segment: scalar_traj.segments[i],
            v: vi.as_f64(),
            r: ri.as_f64(),
            margin: (ri - vi).as_f64(),
        });
    }
    Ok(report)
}
