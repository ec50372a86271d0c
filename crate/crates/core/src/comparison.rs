//! Scalar comparison system `r^Δ = g(t, r, ψ_k(r_k))` with the same switching
//! instants as the fuzzy system it bounds.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hybrid::{segment_at, switch_indices};
use crate::scalar::Scalar;
use crate::timescale::{PointClass, TimeScale};

/// `g(t, r, v)`
pub type GFn<T> = dyn Fn(T, T, T) -> Result<T> + Send + Sync;

/// `ψ_k(v)`, called with the segment index `k`.
pub type PsiFn<T> = dyn Fn(usize, T) -> Result<T> + Send + Sync;

#[derive(Clone)]
pub struct ScalarHybridSystem<T> {
    ts: Arc<TimeScale<T>>,
    switch_idx: Vec<usize>,
    g: Arc<GFn<T>>,
    psi: Arc<PsiFn<T>>,
    r0: T,
}

impl<T: Scalar> fmt::Debug for ScalarHybridSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarHybridSystem")
            .field("switch_idx", &self.switch_idx)
            .field("r0", &self.r0)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> ScalarHybridSystem<T> {
    pub fn new(
        ts: Arc<TimeScale<T>>,
        switch_times: &[T],
        g: Arc<GFn<T>>,
        psi: Arc<PsiFn<T>>,
        r0: T,
    ) -> Result<Self> {
        let switch_idx = switch_indices(&ts, switch_times)?;
        Self {
            ts,
            switch_idx,
            g,
            psi,
            r0: T::zero(),
        }
        .with_r0(r0)
    }

    pub fn with_r0(&self, r0: T) -> Result<Self> {
        if !(r0 >= T::zero()) || !r0.is_finite() {
            return Err(Error::InvalidSystem(format!("r0 must be finite and >= 0, got {r0}")));
        }
        let mut sys = self.clone();
        sys.r0 = r0;
        Ok(sys)
    }

    pub fn time_scale(&self) -> &Arc<TimeScale<T>> {
        &self.ts
    }

    pub fn switch_indices(&self) -> &[usize] {
        &self.switch_idx
    }

    pub fn r0(&self) -> T {
        self.r0
    }

    pub fn segments(&self) -> usize {
        self.switch_idx.len()
    }

    pub fn segment_at(&self, i: usize) -> usize {
        segment_at(&self.switch_idx, i)
    }

    pub fn g(&self, t: T, r: T, v: T) -> Result<T> {
        (self.g)(t, r, v)
    }

    pub fn psi(&self, k: usize, v: T) -> Result<T> {
        (self.psi)(k, v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarTrajectory<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
    pub segments: Vec<usize>,
    /// Set when a step left a right-dense point; the Euler value then only
    /// approximates the maximal solution.
    pub approximate: bool,
}

impl<T: Scalar> ScalarTrajectory<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Euler recursion `r(σ(t)) = r(t) + μ(t)·g(t, r(t), ψ_k(r_k))` up to `horizon`.
pub fn solve_comparison<T: Scalar>(sys: &ScalarHybridSystem<T>, horizon: T) -> Result<ScalarTrajectory<T>> {
    let ts = sys.time_scale();
    let end = ts.index_of(horizon)?;
    let mut values = Vec::with_capacity(end + 1);
    let mut segments = Vec::with_capacity(end + 1);
    values.push(sys.r0());
    segments.push(0);
    let mut approximate = false;
    let mut k = usize::MAX;
    let mut v = T::zero();
    for i in 0..end {
        let t = ts.point(i);
        let seg = sys.segment_at(i);
        if seg != k {
            k = seg;
            v = sys.psi(k, values[i])?;
            if !v.is_finite() {
                return Err(Error::BlowUp { t: t.as_f64(), segment: k });
            }
        }
        approximate |= ts.classify_at(i) == PointClass::RightDense;
        let g = sys.g(t, values[i], v)?;
        let next = values[i] + ts.mu_at(i)? * g;
        if !g.is_finite() || !next.is_finite() {
            return Err(Error::BlowUp { t: t.as_f64(), segment: k });
        }
        values.push(next);
        segments.push(k);
    }
    Ok(ScalarTrajectory {
        times: ts.points()[..=end].to_vec(),
        values,
        segments,
        approximate,
    })
}

/// Sampling box for the monotonicity check. `t` ranges over the non-terminal
/// stored points up to `t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleBox {
    pub t_max: f64,
    pub r: (f64, f64),
    pub v: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotonicityCondition {
    /// `g(t, r, v)·μ(t) + r` nondecreasing in `r`
    StepMapInR,
    /// `g(t, r, v)` nondecreasing in `v`
    GInV,
    /// `ψ_k(v)` nondecreasing in `v`
    PsiInV,
}

/// A sampled pair `x1 < x2` with `value(x1) > value(x2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityViolation {
    pub condition: MonotonicityCondition,
    pub t: f64,
    pub segment: usize,
    /// The coordinate held fixed: `v` for [`MonotonicityCondition::StepMapInR`], `r` for
    /// [`MonotonicityCondition::GInV`].
    pub fixed: Option<f64>,
    pub x1: f64,
    pub x2: f64,
    pub value1: f64,
    pub value2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub samples: usize,
    pub seed: u64,
    pub sample_box: SampleBox,
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn ordered(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> (f64, f64) {
    let a = rng.random_range(lo..=hi);
    let b = rng.random_range(lo..=hi);
    (a.min(b), a.max(b))
}

fn decreases(value1: f64, value2: f64) -> bool {
    value1 > value2 + 1e-12 * (1.0 + value1.abs().max(value2.abs()))
}

/// Randomised check of the three monotonicity hypotheses of the comparison
/// theorem on `samples` draws from `sample_box`.
pub fn check_monotonicity_hypothesis<T: Scalar>(
    sys: &ScalarHybridSystem<T>,
    samples: usize,
    seed: u64,
    sample_box: &SampleBox,
) -> Result<MonotonicityReport> {
    if samples == 0 {
        return Err(Error::InvalidQuery("monotonicity check needs at least one sample".into()));
    }
    if !(sample_box.r.0 <= sample_box.r.1 && sample_box.v.0 <= sample_box.v.1) {
        return Err(Error::InvalidQuery("empty sampling box".into()));
    }
    let ts = sys.time_scale();
    let n_t = ts.kappa().filter(|&i| ts.point(i).as_f64() <= sample_box.t_max).count();
    if n_t == 0 {
        return Err(Error::InvalidQuery("sampling box contains no non-terminal point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let i = rng.random_range(0..n_t);
        let t = ts.point(i);
        let mu = ts.mu_at(i)?;
        let k = sys.segment_at(i);
        let lit = T::lit;

        let v = rng.random_range(sample_box.v.0..=sample_box.v.1);
        let (r1, r2) = ordered(&mut rng, sample_box.r);
        let step = |r: f64| -> Result<f64> { Ok((sys.g(t, lit(r), lit(v))? * mu + lit(r)).as_f64()) };
        let (s1, s2) = (step(r1)?, step(r2)?);
        if decreases(s1, s2) {
            violations.push(MonotonicityViolation {
                condition: MonotonicityCondition::StepMapInR,
                t: t.as_f64(),
                segment: k,
                fixed: Some(v),
                x1: r1,
                x2: r2,
                value1: s1,
                value2: s2,
            });
        }

        let r = rng.random_range(sample_box.r.0..=sample_box.r.1);
        let (v1, v2) = ordered(&mut rng, sample_box.v);
        let (g1, g2) = (sys.g(t, lit(r), lit(v1))?.as_f64(), sys.g(t, lit(r), lit(v2))?.as_f64());
        if decreases(g1, g2) {
            violations.push(MonotonicityViolation {
                condition: MonotonicityCondition::GInV,
                t: t.as_f64(),
                segment: k,
                fixed: Some(r),
                x1: v1,
                x2: v2,
                value1: g1,
                value2: g2,
            });
        }

        let k_psi = rng.random_range(0..sys.segments());
        let (p1, p2) = (sys.psi(k_psi, lit(r1))?.as_f64(), sys.psi(k_psi, lit(r2))?.as_f64());
        if decreases(p1, p2) {
            violations.push(MonotonicityViolation {
                condition: MonotonicityCondition::PsiInV,
                t: t.as_f64(),
                segment: k_psi,
                fixed: None,
                x1: r1,
                x2: r2,
                value1: p1,
                value2: p2,
            });
        }
    }
    Ok(MonotonicityReport {
        samples,
        seed,
        sample_box: *sample_box,
        violations,
    })
}
