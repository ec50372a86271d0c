//! Δ-Hukuhara derivatives of fuzzy-valued functions on a time scale.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fuzzy::FuzzyVector;
use crate::scalar::Scalar;
use crate::timescale::{PointClass, TimeScale, DINI_FORWARD_SAMPLES};

/// Default relative tolerance for forward/backward quotient agreement at right-dense points.
pub const DENSE_AGREEMENT_RTOL: f64 = 1e-6;

/// Fuzzy vector values at the leading points of a time scale.
#[derive(Debug, Clone)]
pub struct FuzzyTrajectory<T> {
    ts: Arc<TimeScale<T>>,
    values: Vec<FuzzyVector<T>>,
}

impl<T: Scalar> FuzzyTrajectory<T> {
    /// `values[i]` is the state at `ts.point(i)`; it may stop before the last point.
    pub fn new(ts: Arc<TimeScale<T>>, values: Vec<FuzzyVector<T>>) -> Result<Self> {
        let first = values
            .first()
            .ok_or_else(|| Error::InvalidShape("trajectory needs at least one value".into()))?;
        if values.len() > ts.len() {
            return Err(Error::InvalidShape(format!(
                "{} values for a time scale of {} points",
                values.len(),
                ts.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                left: first.dim(),
                right: v.dim(),
            });
        }
        if values.iter().any(|v| v.grid() != first.grid()) {
            return Err(Error::IncompatibleGrids);
        }
        Ok(Self { ts, values })
    }

    /// Samples `f` at every stored point.
    pub fn from_fn<F>(ts: Arc<TimeScale<T>>, f: F) -> Result<Self>
    where
        F: Fn(T) -> Result<FuzzyVector<T>>,
    {
        let values = ts.points().iter().map(|&t| f(t)).collect::<Result<_>>()?;
        Self::new(ts, values)
    }

    pub fn time_scale(&self) -> &Arc<TimeScale<T>> {
        &self.ts
    }

    pub fn values(&self) -> &[FuzzyVector<T>] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &FuzzyVector<T> {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> &[T] {
        &self.ts.points()[..self.values.len()]
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    /// `‖u(t)‖` along the trajectory.
    pub fn norms(&self) -> Vec<T> {
        self.values.iter().map(FuzzyVector::norm).collect()
    }

    fn index_with_successor(&self, t: T) -> Result<usize> {
        let i = self.ts.index_of(t)?;
        self.check_successor(i)?;
        Ok(i)
    }

    fn check_successor(&self, i: usize) -> Result<()> {
        self.ts.mu_at(i)?;
        if i + 1 >= self.values.len() {
            return Err(Error::NoSuccessor {
                t: self.ts.point(i).as_f64(),
            });
        }
        Ok(())
    }
}

/// Outcome of a Δ_H derivative computation at a point of `𝕋^κ`.
#[derive(Debug, Clone, PartialEq)]
pub enum DeltaH<T> {
    Derivative(FuzzyVector<T>),
    NotDifferentiable(String),
}

impl<T> DeltaH<T> {
    pub fn derivative(&self) -> Option<&FuzzyVector<T>> {
        match self {
            DeltaH::Derivative(d) => Some(d),
            DeltaH::NotDifferentiable(_) => None,
        }
    }

    pub fn into_derivative(self) -> Option<FuzzyVector<T>> {
        match self {
            DeltaH::Derivative(d) => Some(d),
            DeltaH::NotDifferentiable(_) => None,
        }
    }

    pub fn is_differentiable(&self) -> bool {
        matches!(self, DeltaH::Derivative(_))
    }
}

/// `[a ⊖_gH b] / h`, or the reason it does not exist.
fn gh_quotient<T: Scalar>(a: &FuzzyVector<T>, b: &FuzzyVector<T>, h: T) -> std::result::Result<FuzzyVector<T>, String> {
    a.gh_difference(b)
        .map(|d| d.scale(T::one() / h))
        .map_err(|e| e.to_string())
}

pub fn delta_h_derivative<T: Scalar>(traj: &FuzzyTrajectory<T>, t: T) -> Result<DeltaH<T>> {
    let i = traj.index_with_successor(t)?;
    delta_h_derivative_at(traj, i, T::lit(DENSE_AGREEMENT_RTOL))
}

/// Δ_H derivative at index `i`.
///
/// Right-scattered: `[f(σ(t)) ⊖_gH f(t)] / μ(t)`, exact up to rounding.
/// Right-dense: forward and backward quotients at the sampled spacing must
/// both exist and agree within `rtol · (1 + magnitude)`.
pub fn delta_h_derivative_at<T: Scalar>(traj: &FuzzyTrajectory<T>, i: usize, rtol: T) -> Result<DeltaH<T>> {
    traj.check_successor(i)?;
    let ts = traj.time_scale();
    let f = traj.values();
    let forward = match gh_quotient(&f[i + 1], &f[i], ts.point(i + 1) - ts.point(i)) {
        Ok(q) => q,
        Err(why) => return Ok(DeltaH::NotDifferentiable(why)),
    };
    if ts.classify_at(i) == PointClass::RightScattered || i == 0 {
        return Ok(DeltaH::Derivative(forward));
    }
    let backward = match gh_quotient(&f[i], &f[i - 1], ts.point(i) - ts.point(i - 1)) {
        Ok(q) => q,
        Err(why) => return Ok(DeltaH::NotDifferentiable(format!("backward quotient: {why}"))),
    };
    let gap = forward.dist(&backward)?;
    let scale = T::one() + forward.norm().max(backward.norm());
    if gap > rtol * scale {
        return Ok(DeltaH::NotDifferentiable(format!(
            "forward and backward quotients differ by {gap} at t = {}",
            ts.point(i)
        )));
    }
    Ok(DeltaH::Derivative(forward))
}

/// Checks both inequality families of the Δ_H derivative definition for `candidate`.
///
/// The neighbourhood `0 ≤ h < δ` is sampled at every stored point with
/// `δ = μ(t)` (right-scattered) or `δ` spanning the next
/// [`DINI_FORWARD_SAMPLES`] spacings (right-dense, where `σ(t) = t`). Returns `Ok(false)` as soon as one
/// inequality fails.
pub fn verify_derivative_definition<T: Scalar>(
    traj: &FuzzyTrajectory<T>,
    t: T,
    candidate: &FuzzyVector<T>,
    eps: T,
) -> Result<bool> {
    if !(eps > T::zero()) {
        return Err(Error::VerificationInconclusive {
            t: t.as_f64(),
            reason: "eps must be positive".into(),
        });
    }
    let i = traj.index_with_successor(t)?;
    let ts = traj.time_scale();
    let dense = ts.classify_at(i) == PointClass::RightDense;
    let (sigma_idx, mu) = if dense {
        (i, T::zero())
    } else {
        (i + 1, ts.point(i + 1) - ts.point(i))
    };
    let radius = if dense {
        let far = (i + DINI_FORWARD_SAMPLES).min(traj.len() - 1);
        ts.point(far) - t
    } else {
        mu
    };
    let slack = T::tol();
    let f = traj.values();
    let inconclusive = |e: Error| Error::VerificationInconclusive {
        t: t.as_f64(),
        reason: e.to_string(),
    };

    let mut offsets: Vec<T> = vec![T::zero()];
    for (j, &s) in ts.points()[..traj.len()].iter().enumerate() {
        if j != i && (s - t).abs() < radius * (T::one() - slack) {
            offsets.push((s - t).abs());
        }
    }

    for h in offsets {
        // forward family: d[f(t+h) ⊖ f(σ(t)), Δ·(h − μ)] ≤ ε|h − μ|
        if let Ok(j) = ts.index_of(t + h) {
            if j < traj.len() {
                let lhs = f[j].gh_difference(&f[sigma_idx]).map_err(inconclusive)?;
                let rhs = candidate.scale(h - mu);
                let d = lhs.dist(&rhs)?;
                if d > eps * (h - mu).abs() + slack * (T::one() + lhs.norm()) {
                    return Ok(false);
                }
            }
        }
        // backward family: d[f(σ(t)) ⊖ f(t − h), Δ·(μ + h)] ≤ ε(μ + h)
        if let Ok(j) = ts.index_of(t - h) {
            let lhs = f[sigma_idx].gh_difference(&f[j]).map_err(inconclusive)?;
            let rhs = candidate.scale(mu + h);
            let d = lhs.dist(&rhs)?;
            if d > eps * (mu + h) + slack * (T::one() + lhs.norm()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
