use serde::Serialize;

use super::grid::AlphaGrid;
use super::interval::{hausdorff_interval, Interval};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A fuzzy number in α-cut form: `[u]^α = [lower[i], upper[i]]` for `α = grid[i]`.
///
/// Invariants (checked at construction, with the scalar's absolute tolerance):
/// every cut is nonempty, cuts are nested (lower nondecreasing, upper
/// nonincreasing in α) and all endpoints are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNumber<T> {
    grid: AlphaGrid<T>,
    lower: Vec<T>,
    upper: Vec<T>,
}

/// One serialized α-cut.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutRecord {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Where the nestedness invariant first fails, if anywhere.
fn first_unnested<T: Scalar>(lower: &[T], upper: &[T], tol: T) -> Option<usize> {
    (1..lower.len()).find(|&i| lower[i] < lower[i - 1] - tol || upper[i] > upper[i - 1] + tol)
}

impl<T: Scalar> FuzzyNumber<T> {
    pub fn from_cuts(grid: AlphaGrid<T>, lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.len() != grid.len() || upper.len() != grid.len() {
            return Err(Error::InvalidShape(format!(
                "expected {} levels, got {} lower / {} upper",
                grid.len(),
                lower.len(),
                upper.len()
            )));
        }
        let tol = T::tol();
        if let Some(i) = lower
            .iter()
            .zip(&upper)
            .position(|(l, u)| !l.is_finite() || !u.is_finite())
        {
            return Err(Error::InvalidShape(format!(
                "non-finite endpoint at alpha = {}",
                grid.alpha(i)
            )));
        }
        if let Some(i) = lower.iter().zip(&upper).position(|(&l, &u)| l > u + tol) {
            return Err(Error::InvalidShape(format!(
                "empty cut at alpha = {}: [{}, {}]",
                grid.alpha(i),
                lower[i],
                upper[i]
            )));
        }
        if let Some(i) = first_unnested(&lower, &upper, tol) {
            return Err(Error::InvalidShape(format!(
                "cuts not nested at alpha = {}",
                grid.alpha(i)
            )));
        }
        Ok(Self { grid, lower, upper })
    }

    /// Trapezoid with support `[a, d]` and core `[b, c]`.
    pub fn trapezoid(a: T, b: T, c: T, d: T, grid: &AlphaGrid<T>) -> Result<Self> {
        if !(a <= b && b <= c && c <= d) {
            return Err(Error::InvalidShape(format!(
                "trapezoid requires a <= b <= c <= d, got ({a}, {b}, {c}, {d})"
            )));
        }
        let lower = grid.levels().iter().map(|&al| a + al * (b - a)).collect();
        let upper = grid.levels().iter().map(|&al| d - al * (d - c)).collect();
        Self::from_cuts(grid.clone(), lower, upper)
    }

    pub fn triangular(a: T, b: T, c: T, grid: &AlphaGrid<T>) -> Result<Self> {
        Self::trapezoid(a, b, b, c, grid)
    }

    pub fn crisp(x: T, grid: &AlphaGrid<T>) -> Self {
        Self::crisp_interval(x, x, grid)
    }

    /// Every level equal to `[lo, hi]`.
    pub fn crisp_interval(lo: T, hi: T, grid: &AlphaGrid<T>) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        Self {
            grid: grid.clone(),
            lower: vec![lo; grid.len()],
            upper: vec![hi; grid.len()],
        }
    }

    /// The crisp zero `0̃`.
    pub fn zero(grid: &AlphaGrid<T>) -> Self {
        Self::crisp(T::zero(), grid)
    }

    pub fn grid(&self) -> &AlphaGrid<T> {
        &self.grid
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn cut(&self, i: usize) -> Interval<T> {
        Interval {
            lo: self.lower[i],
            hi: self.upper[i],
        }
    }

    /// `(α, [u]^α)` pairs from the support up to the core.
    pub fn levels(&self) -> impl Iterator<Item = (T, Interval<T>)> + '_ {
        (0..self.grid.len()).map(move |i| (self.grid.alpha(i), self.cut(i)))
    }

    pub fn cut_records(&self) -> Vec<CutRecord> {
        self.levels()
            .map(|(alpha, c)| CutRecord {
                alpha: alpha.as_f64(),
                lower: c.lo.as_f64(),
                upper: c.hi.as_f64(),
            })
            .collect()
    }

    pub fn is_crisp(&self) -> bool {
        let x = self.lower[0];
        self.lower.iter().chain(&self.upper).all(|&v| v == x)
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::IncompatibleGrids)
        }
    }

    /// Level-wise Minkowski sum `u ⊕ v`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let lower = self.lower.iter().zip(&other.lower).map(|(a, b)| *a + *b).collect();
        let upper = self.upper.iter().zip(&other.upper).map(|(a, b)| *a + *b).collect();
        Ok(Self {
            grid: self.grid.clone(),
            lower,
            upper,
        })
    }

    /// Scalar multiple `k · u`; endpoints swap for negative `k`.
    pub fn scale(&self, k: T) -> Self {
        let lo = self.lower.iter().map(|&l| k * l);
        let hi = self.upper.iter().map(|&h| k * h);
        let (lower, upper) = if k >= T::zero() {
            (lo.collect(), hi.collect())
        } else {
            (hi.collect(), lo.collect())
        };
        Self {
            grid: self.grid.clone(),
            lower,
            upper,
        }
    }

    /// `(−1) · u`
    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    /// Generalized Hukuhara difference `u ⊖_gH v`.
    ///
    /// Level-wise `[min(u̲−v̲, u̅−v̅), max(u̲−v̲, u̅−v̅)]`; if the resulting
    /// cuts are not nested (beyond the tolerance) the difference does not exist.
    pub fn gh_difference(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let m = self.grid.len();
        let mut lower = Vec::with_capacity(m);
        let mut upper = Vec::with_capacity(m);
        for i in 0..m {
            let dl = self.lower[i] - other.lower[i];
            let du = self.upper[i] - other.upper[i];
            lower.push(dl.min(du));
            upper.push(dl.max(du));
        }
        if let Some(i) = first_unnested(&lower, &upper, T::tol()) {
            return Err(Error::GhDifferenceUndefined {
                alpha: self.grid.alpha(i).as_f64(),
            });
        }
        Ok(Self {
            grid: self.grid.clone(),
            lower,
            upper,
        })
    }

    /// Strict Hukuhara difference: the `w` with `u = v ⊕ w`, if it exists.
    pub fn hukuhara_difference(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let tol = T::tol();
        let lower: Vec<T> = self.lower.iter().zip(&other.lower).map(|(a, b)| *a - *b).collect();
        let upper: Vec<T> = self.upper.iter().zip(&other.upper).map(|(a, b)| *a - *b).collect();
        let bad = lower
            .iter()
            .zip(&upper)
            .position(|(&l, &u)| l > u + tol)
            .or_else(|| first_unnested(&lower, &upper, tol));
        if let Some(i) = bad {
            return Err(Error::HukuharaDifferenceUndefined {
                alpha: self.grid.alpha(i).as_f64(),
            });
        }
        Ok(Self {
            grid: self.grid.clone(),
            lower,
            upper,
        })
    }

    /// `d_∞(u, v)`: largest level-wise Hausdorff distance.
    pub fn dist(&self, other: &Self) -> Result<T> {
        self.check_grid(other)?;
        Ok((0..self.grid.len())
            .map(|i| hausdorff_interval(self.cut(i), other.cut(i)))
            .fold(T::zero(), T::max))
    }

    /// `d_∞(u, 0̃)`; the support cut dominates, but all levels are scanned.
    pub fn magnitude(&self) -> T {
        (0..self.grid.len())
            .map(|i| self.cut(i).magnitude())
            .fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.grid == other.grid
            && self
                .lower
                .iter()
                .zip(&other.lower)
                .chain(self.upper.iter().zip(&other.upper))
                .all(|(a, b)| (*a - *b).abs() <= tol)
    }
}

/// Trapezoidal fuzzy number with support `[a, d]` and core `[b, c]`.
pub fn make_trapezoid<T: Scalar>(a: T, b: T, c: T, d: T, grid: &AlphaGrid<T>) -> Result<FuzzyNumber<T>> {
    FuzzyNumber::trapezoid(a, b, c, d, grid)
}
