//! Hybrid fuzzy dynamic systems with piecewise-constant switching.
//!
//! On segment `k` (`t_k ≤ t ≤ t_{k+1}`) the state obeys
//! `Δ_H u(t) = f(t, u(t), λ_k(t_k, u(t_k)))`; the switch value is computed
//! once when the segment is entered and held constant. Solutions are built
//! with a Hukuhara–Euler recursion, which is exact at right-scattered points.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{AlphaGrid, FuzzyNumber, FuzzyVector};
use crate::hukuhara::FuzzyTrajectory;
use crate::scalar::Scalar;
use crate::timescale::TimeScale;

/// Right-hand side `f(t, u, λ)`.
pub type RhsFn<T> = dyn Fn(T, &FuzzyVector<T>, &FuzzyVector<T>) -> Result<FuzzyVector<T>> + Send + Sync;

/// Switch map `λ_k(t_k, u_k)`, called with the segment index `k`.
pub type SwitchFn<T> = dyn Fn(usize, T, &FuzzyVector<T>) -> Result<FuzzyVector<T>> + Send + Sync;

/// Which gH-difference branch a step follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepMode {
    /// `u(σ(t)) = u(t) ⊕ μ(t)·f`; always defined.
    #[default]
    Expansive,
    /// `u(t) = u(σ(t)) ⊕ (−1)·μ(t)·f`, solved for `u(σ(t))` by Hukuhara difference.
    Contractive,
}

impl fmt::Display for StepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepMode::Expansive => "expansive",
            StepMode::Contractive => "contractive",
        })
    }
}

impl FromStr for StepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expansive" => Ok(StepMode::Expansive),
            "contractive" => Ok(StepMode::Contractive),
            other => Err(Error::Config(format!(
                "unknown step mode '{other}' (expected expansive|contractive)"
            ))),
        }
    }
}

#[derive(Clone)]
pub struct HybridFuzzySystem<T> {
    ts: Arc<TimeScale<T>>,
    switch_idx: Vec<usize>,
    rhs: Arc<RhsFn<T>>,
    switch_map: Arc<SwitchFn<T>>,
    rho: T,
    u0: FuzzyVector<T>,
}

impl<T: Scalar> fmt::Debug for HybridFuzzySystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HybridFuzzySystem")
            .field("switch_idx", &self.switch_idx)
            .field("rho", &self.rho)
            .field("dim", &self.u0.dim())
            .finish_non_exhaustive()
    }
}

/// Converts switching instants to indices; `t₀` is prepended when missing.
pub(crate) fn switch_indices<T: Scalar>(ts: &TimeScale<T>, switch_times: &[T]) -> Result<Vec<usize>> {
    let mut idx = Vec::with_capacity(switch_times.len() + 1);
    for &t in switch_times {
        let i = ts
            .index_of(t)
            .map_err(|_| Error::InvalidSystem(format!("switch time {t} is not on the time scale")))?;
        if let Some(&prev) = idx.last() {
            if i <= prev {
                return Err(Error::InvalidSystem("switch times must be strictly increasing".into()));
            }
        }
        idx.push(i);
    }
    if idx.first() != Some(&0) {
        idx.insert(0, 0);
    }
    Ok(idx)
}

/// Segment governing the step that leaves index `i`.
pub(crate) fn segment_at(switch_idx: &[usize], i: usize) -> usize {
    switch_idx.partition_point(|&s| s <= i) - 1
}

impl<T: Scalar> HybridFuzzySystem<T> {
    pub fn new(
        ts: Arc<TimeScale<T>>,
        switch_times: &[T],
        rhs: Arc<RhsFn<T>>,
        switch_map: Arc<SwitchFn<T>>,
        rho: T,
        u0: FuzzyVector<T>,
    ) -> Result<Self> {
        let switch_idx = switch_indices(&ts, switch_times)?;
        if !(rho > T::zero()) {
            return Err(Error::InvalidSystem("rho must be positive".into()));
        }
        let sys = Self {
            ts,
            switch_idx,
            rhs,
            switch_map,
            rho,
            u0: u0.clone(),
        };
        sys.with_initial(u0)
    }

    /// Same dynamics from a different initial state in `S(ρ)`.
    pub fn with_initial(&self, u0: FuzzyVector<T>) -> Result<Self> {
        let norm = u0.norm();
        if !(norm < self.rho) {
            return Err(Error::InvalidSystem(format!(
                "initial condition outside S(rho): D(u0, 0) = {norm} >= rho = {}",
                self.rho
            )));
        }
        let mut sys = self.clone();
        sys.u0 = u0;
        Ok(sys)
    }

    pub fn with_rho(&self, rho: T) -> Result<Self> {
        let mut sys = self.clone();
        sys.rho = rho;
        sys.with_initial(self.u0.clone())
    }

    pub fn time_scale(&self) -> &Arc<TimeScale<T>> {
        &self.ts
    }

    pub fn switch_indices(&self) -> &[usize] {
        &self.switch_idx
    }

    pub fn switch_times(&self) -> Vec<T> {
        self.switch_idx.iter().map(|&i| self.ts.point(i)).collect()
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn initial(&self) -> &FuzzyVector<T> {
        &self.u0
    }

    pub fn dim(&self) -> usize {
        self.u0.dim()
    }

    pub fn grid(&self) -> &AlphaGrid<T> {
        self.u0.grid()
    }

    pub fn rhs(&self, t: T, u: &FuzzyVector<T>, lam: &FuzzyVector<T>) -> Result<FuzzyVector<T>> {
        (self.rhs)(t, u, lam)
    }

    pub fn switch_value(&self, k: usize, t_k: T, u_k: &FuzzyVector<T>) -> Result<FuzzyVector<T>> {
        (self.switch_map)(k, t_k, u_k)
    }

    pub fn segment_at(&self, i: usize) -> usize {
        segment_at(&self.switch_idx, i)
    }
}

/// Trajectory plus solver diagnostics.
#[derive(Debug, Clone)]
pub struct HybridSolution<T> {
    pub trajectory: FuzzyTrajectory<T>,
    /// Segment whose dynamics produced each value (`0` for the initial state).
    pub segments: Vec<usize>,
    /// `λ_k` as evaluated at each segment entry that was reached.
    pub switch_values: Vec<FuzzyVector<T>>,
    /// Per step: `D_∞(Δ_H u(t), f(t, u(t), λ_k))`, or `None` if `Δ_H u(t)` does not exist.
    pub residuals: Vec<Option<T>>,
    pub mode: StepMode,
    /// First index where `D_∞(u, 0̃) ≥ ρ`.
    pub left_domain_at: Option<usize>,
}

fn check_finite<T: Scalar>(u: &FuzzyVector<T>, t: T) -> Result<()> {
    let ok = u
        .components()
        .iter()
        .all(|c| c.lower().iter().chain(c.upper()).all(|x| x.is_finite()));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidTrajectory {
            t: t.as_f64(),
            reason: "non-finite endpoint".into(),
        })
    }
}

/// One Hukuhara–Euler step from index `i`. Returns `(u(σ(t)), f(t, u(t), λ))`.
pub fn euler_step<T: Scalar>(
    sys: &HybridFuzzySystem<T>,
    mode: StepMode,
    i: usize,
    u: &FuzzyVector<T>,
    lam: &FuzzyVector<T>,
) -> Result<(FuzzyVector<T>, FuzzyVector<T>)> {
    let ts = sys.time_scale();
    let t = ts.point(i);
    let mu = ts.mu_at(i)?;
    let f = sys.rhs(t, u, lam).map_err(|e| Error::StepFailure {
        t: t.as_f64(),
        reason: format!("right-hand side: {e}"),
    })?;
    let next = match mode {
        StepMode::Expansive => u.add(&f.scale(mu))?,
        StepMode::Contractive => u
            .hukuhara_difference(&f.scale(-mu))
            .map_err(|e| Error::StepFailure {
                t: t.as_f64(),
                reason: e.to_string(),
            })?,
    };
    check_finite(&next, ts.point(i + 1))?;
    Ok((next, f))
}

fn residual<T: Scalar>(u: &FuzzyVector<T>, next: &FuzzyVector<T>, f: &FuzzyVector<T>, mu: T) -> Option<T> {
    let d = next.gh_difference(u).ok()?.scale(T::one() / mu);
    d.dist(f).ok()
}

/// Solves one segment with a frozen switch value, from `start` to `end` (inclusive).
pub fn solve_segment<T: Scalar>(
    sys: &HybridFuzzySystem<T>,
    mode: StepMode,
    start: usize,
    end: usize,
    u_start: FuzzyVector<T>,
    lam: &FuzzyVector<T>,
) -> Result<Vec<FuzzyVector<T>>> {
    let mut out = Vec::with_capacity(end + 1 - start);
    out.push(u_start);
    for i in start..end {
        let (next, _) = euler_step(sys, mode, i, &out[i - start], lam)?;
        out.push(next);
    }
    Ok(out)
}

/// Solves the hybrid system from `t₀` up to `horizon` (a stored point).
///
/// At each switching instant `t_k` the value inherited from segment `k − 1`
/// becomes `u_k`, and `λ_k(t_k, u_k)` is evaluated exactly once.
pub fn solve<T: Scalar>(sys: &HybridFuzzySystem<T>, mode: StepMode, horizon: T) -> Result<HybridSolution<T>> {
    let ts = sys.time_scale();
    let end = ts.index_of(horizon)?;
    let mut values = Vec::with_capacity(end + 1);
    let mut segments = Vec::with_capacity(end + 1);
    let mut residuals = Vec::with_capacity(end);
    let mut switch_values = Vec::new();
    values.push(sys.initial().clone());
    segments.push(0);

    let mut k = usize::MAX;
    let mut lam = sys.initial().clone();
    for i in 0..end {
        let seg = sys.segment_at(i);
        if seg != k {
            k = seg;
            lam = sys.switch_value(k, ts.point(i), &values[i]).map_err(|e| Error::StepFailure {
                t: ts.point(i).as_f64(),
                reason: format!("switch map {k}: {e}"),
            })?;
            if lam.dim() != sys.dim() {
                return Err(Error::DimensionMismatch {
                    left: sys.dim(),
                    right: lam.dim(),
                });
            }
            switch_values.push(lam.clone());
        }
        let (next, f) = euler_step(sys, mode, i, &values[i], &lam)?;
        residuals.push(residual(&values[i], &next, &f, ts.mu_at(i)?));
        values.push(next);
        segments.push(k);
    }
    let left_domain_at = values.iter().position(|v| !(v.norm() < sys.rho()));
    Ok(HybridSolution {
        trajectory: FuzzyTrajectory::new(ts.clone(), values)?,
        segments,
        switch_values,
        residuals,
        mode,
        left_domain_at,
    })
}

/// The switched system `Δ_H u = ⊖u ⊕ η(t)·λ_k(u_k)` on `𝕋 = {0, 1, …}`.
///
/// `⊖` is the regressive negation of the constant 1, i.e. multiplication by
/// `−1/(1+μ(t))`, and `η(t) = 1/(1+μ(t))`. `λ₀ = 0̃` and `λ_k(u_k) = u_k`
/// for `k ≥ 1`; switches happen every `switch_gap` points, and the scale
/// extends one gap past the last switch. Initial state `tri(−1, 0, 1)`, `ρ = 10`.
pub fn build_example_system<T: Scalar>(
    grid: &AlphaGrid<T>,
    n_switches: usize,
    switch_gap: usize,
) -> Result<HybridFuzzySystem<T>> {
    if n_switches < 1 || switch_gap < 1 {
        return Err(Error::InvalidSystem("n_switches and switch_gap must be at least 1".into()));
    }
    let ts = Arc::new(TimeScale::integer((n_switches + 1) * switch_gap)?);
    let switch_times: Vec<T> = (0..=n_switches).map(|k| T::lit((k * switch_gap) as f64)).collect();
    let ts_rhs = ts.clone();
    let rhs = move |t: T, u: &FuzzyVector<T>, lam: &FuzzyVector<T>| {
        let eta = T::one() / (T::one() + ts_rhs.mu(t)?);
        u.scale(-eta).add(&lam.scale(eta))
    };
    let switch_map = |k: usize, _t: T, u_k: &FuzzyVector<T>| {
        if k == 0 {
            FuzzyVector::zero(u_k.grid(), u_k.dim())
        } else {
            Ok(u_k.clone())
        }
    };
    let u0 = FuzzyVector::scalar(FuzzyNumber::triangular(-T::one(), T::zero(), T::one(), grid)?);
    HybridFuzzySystem::new(ts, &switch_times, Arc::new(rhs), Arc::new(switch_map), T::lit(10.0), u0)
}
