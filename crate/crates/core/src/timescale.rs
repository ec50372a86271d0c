//! Finite sampled time scales.
//!
//! A time scale is stored as a strictly increasing list of points. The
//! forward jump `σ(t)` of a stored point is the next stored point and the
//! graininess is `μ(t) = σ(t) − t`. Continuous pieces enter through a
//! sampling resolution; a point whose spacing is at most `dense_threshold`
//! is classified right-dense, and limits at such points are approximated by
//! quotients at the sampled spacing.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_DENSE_THRESHOLD: f64 = 1e-6;

/// Number of forward samples used for the upper Dini derivative at right-dense points.
pub const DINI_FORWARD_SAMPLES: usize = 8;

/// How a time scale was generated. Mirrors the config/CLI syntax.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeScaleSpec {
    /// `{0, 1, …, n}`
    Integer { n: usize },
    /// `{t0 + i·h : i = 0..=n}`
    Uniform { t0: f64, h: f64, n: usize },
    /// `{t0·qⁱ : i = 0..=n}`
    QScale { t0: f64, q: f64, n: usize },
    /// Union of closed intervals sampled at `resolution`.
    Intervals { intervals: Vec<(f64, f64)>, resolution: f64 },
    Explicit { points: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    RightScattered,
    RightDense,
    /// Last stored point: no successor on the sampled scale.
    Terminal,
}

#[derive(Debug, Clone)]
pub struct TimeScale<T> {
    points: Vec<T>,
    dense_threshold: T,
    spec: TimeScaleSpec,
}

impl<T: Scalar> TimeScale<T> {
    fn from_points(points: Vec<T>, spec: TimeScaleSpec) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidTimeScale(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidTimeScale("non-finite point".into()));
        }
        if let Some(w) = points.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidTimeScale(format!(
                "points must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self {
            points,
            dense_threshold: T::lit(DEFAULT_DENSE_THRESHOLD),
            spec,
        })
    }

    /// `{0, 1, …, n}` (a finite window of `N₀`).
    pub fn integer(n: usize) -> Result<Self> {
        let points = (0..=n).map(|i| T::lit(i as f64)).collect();
        Self::from_points(points, TimeScaleSpec::Integer { n })
    }

    /// `{t0 + i·h : i = 0..=n}`
    pub fn uniform(t0: T, h: T, n: usize) -> Result<Self> {
        if !(h > T::zero()) {
            return Err(Error::InvalidTimeScale("step h must be positive".into()));
        }
        let points = (0..=n).map(|i| t0 + h * T::lit(i as f64)).collect();
        Self::from_points(
            points,
            TimeScaleSpec::Uniform {
                t0: t0.as_f64(),
                h: h.as_f64(),
                n,
            },
        )
    }

    /// `{t0·qⁱ : i = 0..=n}` with `t0 > 0`, `q > 1`.
    pub fn qscale(t0: T, q: T, n: usize) -> Result<Self> {
        if !(t0 > T::zero() && q > T::one()) {
            return Err(Error::InvalidTimeScale("q-scale requires t0 > 0 and q > 1".into()));
        }
        let mut points = Vec::with_capacity(n + 1);
        let mut t = t0;
        for _ in 0..=n {
            points.push(t);
            t = t * q;
        }
        Self::from_points(
            points,
            TimeScaleSpec::QScale {
                t0: t0.as_f64(),
                q: q.as_f64(),
                n,
            },
        )
    }

    /// Union of disjoint closed intervals, each sampled as `a, a + res, …, b`.
    pub fn intervals(intervals: &[(T, T)], resolution: T) -> Result<Self> {
        if !(resolution > T::zero()) {
            return Err(Error::InvalidTimeScale("resolution must be positive".into()));
        }
        let mut points = Vec::new();
        for (j, &(a, b)) in intervals.iter().enumerate() {
            if !(a <= b) {
                return Err(Error::InvalidTimeScale(format!("interval [{a}, {b}] is reversed")));
            }
            if j > 0 && !(a > intervals[j - 1].1) {
                return Err(Error::InvalidTimeScale("intervals must be sorted and disjoint".into()));
            }
            let steps = ((b - a) / resolution).round().to_usize().unwrap_or(0);
            for i in 0..steps {
                let p = a + resolution * T::lit(i as f64);
                if p < b {
                    points.push(p);
                }
            }
            points.push(b);
        }
        let spec = TimeScaleSpec::Intervals {
            intervals: intervals.iter().map(|(a, b)| (a.as_f64(), b.as_f64())).collect(),
            resolution: resolution.as_f64(),
        };
        Self::from_points(points, spec)
    }

    pub fn explicit(points: Vec<T>) -> Result<Self> {
        let spec = TimeScaleSpec::Explicit {
            points: points.iter().map(|p| p.as_f64()).collect(),
        };
        Self::from_points(points, spec)
    }

    pub fn from_spec(spec: &TimeScaleSpec) -> Result<Self> {
        match spec {
            TimeScaleSpec::Integer { n } => Self::integer(*n),
            TimeScaleSpec::Uniform { t0, h, n } => Self::uniform(T::lit(*t0), T::lit(*h), *n),
            TimeScaleSpec::QScale { t0, q, n } => Self::qscale(T::lit(*t0), T::lit(*q), *n),
            TimeScaleSpec::Intervals {
                intervals,
                resolution,
            } => {
                let iv: Vec<(T, T)> = intervals.iter().map(|&(a, b)| (T::lit(a), T::lit(b))).collect();
                Self::intervals(&iv, T::lit(*resolution))
            }
            TimeScaleSpec::Explicit { points } => {
                Self::explicit(points.iter().map(|&p| T::lit(p)).collect())
            }
        }
    }

    pub fn with_dense_threshold(mut self, threshold: T) -> Result<Self> {
        if !(threshold > T::zero()) {
            return Err(Error::InvalidTimeScale("dense threshold must be positive".into()));
        }
        self.dense_threshold = threshold;
        Ok(self)
    }

    pub fn spec(&self) -> &TimeScaleSpec {
        &self.spec
    }

    pub fn dense_threshold(&self) -> T {
        self.dense_threshold
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> T {
        self.points[i]
    }

    pub fn first(&self) -> T {
        self.points[0]
    }

    pub fn last(&self) -> T {
        self.points[self.points.len() - 1]
    }

    /// Index of a stored point, matched with a relative tolerance.
    pub fn index_of(&self, t: T) -> Result<usize> {
        let tol = T::tol() * t.abs().max(T::one());
        let i = self.points.partition_point(|&p| p < t - tol);
        match self.points.get(i) {
            Some(&p) if (p - t).abs() <= tol => Ok(i),
            _ => Err(Error::UnknownPoint { t: t.as_f64() }),
        }
    }

    pub fn contains(&self, t: T) -> bool {
        self.index_of(t).is_ok()
    }

    fn check_successor(&self, i: usize) -> Result<()> {
        if i >= self.points.len() {
            return Err(Error::UnknownPoint { t: f64::NAN });
        }
        if i + 1 == self.points.len() {
            return Err(Error::NoSuccessor {
                t: self.points[i].as_f64(),
            });
        }
        Ok(())
    }

    pub fn sigma_at(&self, i: usize) -> Result<T> {
        self.check_successor(i)?;
        Ok(self.points[i + 1])
    }

    pub fn mu_at(&self, i: usize) -> Result<T> {
        self.check_successor(i)?;
        Ok(self.points[i + 1] - self.points[i])
    }

    /// Forward jump `σ(t)`.
    pub fn sigma(&self, t: T) -> Result<T> {
        self.sigma_at(self.index_of(t)?)
    }

    /// Graininess `μ(t) = σ(t) − t`.
    pub fn mu(&self, t: T) -> Result<T> {
        self.mu_at(self.index_of(t)?)
    }

    pub fn classify_at(&self, i: usize) -> PointClass {
        match self.mu_at(i) {
            Err(_) => PointClass::Terminal,
            Ok(mu) if mu <= self.dense_threshold => PointClass::RightDense,
            Ok(_) => PointClass::RightScattered,
        }
    }

    pub fn classify(&self, t: T) -> Result<PointClass> {
        Ok(self.classify_at(self.index_of(t)?))
    }

    pub fn has_right_dense(&self) -> bool {
        (0..self.len()).any(|i| self.classify_at(i) == PointClass::RightDense)
    }

    /// Indices of `𝕋^κ` (every point but the last).
    pub fn kappa(&self) -> std::ops::Range<usize> {
        0..self.points.len() - 1
    }

    /// Spacing that bounds the quotient error at `i`: `μ` at right-dense points, 0 otherwise.
    pub fn derivative_error_scale(&self, i: usize) -> T {
        match self.classify_at(i) {
            PointClass::RightDense => self.points[i + 1] - self.points[i],
            _ => T::zero(),
        }
    }

    /// Delta derivative of sampled values at index `i`: `[f(σ(t)) − f(t)] / μ(t)`.
    pub fn delta_derivative_sampled(&self, values: &[T], i: usize) -> Result<T> {
        let mu = self.mu_at(i)?;
        Ok((values[i + 1] - values[i]) / mu)
    }

    pub fn delta_derivative<F: Fn(T) -> T>(&self, f: F, t: T) -> Result<T> {
        let i = self.index_of(t)?;
        let mu = self.mu_at(i)?;
        Ok((f(self.points[i + 1]) - f(self.points[i])) / mu)
    }

    /// Upper Δ-Dini derivative of sampled values at index `i`.
    ///
    /// At right-scattered points this is the delta quotient. At right-dense
    /// points `σ(t) = t`, and the derivative is estimated as the largest
    /// forward quotient `[f(s) − f(t)] / (s − t)` over the next
    /// [`DINI_FORWARD_SAMPLES`] stored points `s`.
    pub fn upper_dini_sampled(&self, values: &[T], i: usize) -> Result<T> {
        match self.classify_at(i) {
            PointClass::Terminal => Err(Error::NoSuccessor {
                t: self.points[i].as_f64(),
            }),
            PointClass::RightScattered => self.delta_derivative_sampled(values, i),
            PointClass::RightDense => {
                let t = self.points[i];
                let end = (i + DINI_FORWARD_SAMPLES).min(self.points.len() - 1).min(values.len() - 1);
                Ok((i + 1..=end)
                    .map(|j| (values[j] - values[i]) / (self.points[j] - t))
                    .fold(T::neg_infinity(), T::max))
            }
        }
    }

    pub fn upper_dini<F: Fn(T) -> T>(&self, f: F, t: T) -> Result<T> {
        let i = self.index_of(t)?;
        self.check_successor(i)?;
        let end = (i + DINI_FORWARD_SAMPLES).min(self.points.len() - 1);
        let values: Vec<T> = self.points[..=end].iter().map(|&s| f(s)).collect();
        self.upper_dini_sampled(&values, i)
    }
}

/// Real function sampled on `𝕋^κ` with `1 + μ(t)p(t) ≠ 0` at every sample.
#[derive(Debug, Clone)]
pub struct RegressiveFn<'a, T> {
    ts: &'a TimeScale<T>,
    values: Vec<T>,
}

impl<'a, T: Scalar> RegressiveFn<'a, T> {
    pub fn from_values(ts: &'a TimeScale<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != ts.len() - 1 {
            return Err(Error::InvalidTimeScale(format!(
                "regressive function needs {} samples, got {}",
                ts.len() - 1,
                values.len()
            )));
        }
        for i in ts.kappa() {
            let mu = ts.point(i + 1) - ts.point(i);
            let v = values[i];
            if !v.is_finite() || T::one() + mu * v == T::zero() {
                return Err(Error::NonRegressive {
                    t: ts.point(i).as_f64(),
                });
            }
        }
        Ok(Self { ts, values })
    }

    pub fn from_fn<F: Fn(T) -> T>(ts: &'a TimeScale<T>, f: F) -> Result<Self> {
        let values = ts.kappa().map(|i| f(ts.point(i))).collect();
        Self::from_values(ts, values)
    }

    pub fn constant(ts: &'a TimeScale<T>, c: T) -> Result<Self> {
        Self::from_fn(ts, |_| c)
    }

    pub fn time_scale(&self) -> &'a TimeScale<T> {
        self.ts
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn eval(&self, t: T) -> Result<T> {
        let i = self.ts.index_of(t)?;
        self.values.get(i).copied().ok_or(Error::NoSuccessor { t: t.as_f64() })
    }

    fn pointwise<F: Fn(T, T, T) -> T>(&self, other: &Self, op: F) -> Result<Self> {
        if !std::ptr::eq(self.ts, other.ts) && self.ts.points() != other.ts.points() {
            return Err(Error::InvalidTimeScale("operands live on different time scales".into()));
        }
        let values = self
            .ts
            .kappa()
            .map(|i| op(self.ts.point(i + 1) - self.ts.point(i), self.values[i], other.values[i]))
            .collect();
        Self::from_values(self.ts, values)
    }

    /// `p ⊕ q = p + q + μpq`
    pub fn circle_plus(&self, other: &Self) -> Result<Self> {
        self.pointwise(other, |mu, p, q| p + q + mu * p * q)
    }

    /// `p ⊖ q = (p − q) / (1 + μq)`
    pub fn circle_minus(&self, other: &Self) -> Result<Self> {
        self.pointwise(other, |mu, p, q| (p - q) / (T::one() + mu * q))
    }

    /// `⊖p = 0 ⊖ p = −p / (1 + μp)`
    pub fn ominus(&self) -> Result<Self> {
        self.pointwise(self, |mu, p, _| -p / (T::one() + mu * p))
    }
}

impl fmt::Display for TimeScaleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeScaleSpec::Integer { n } => write!(f, "integer({n})"),
            TimeScaleSpec::Uniform { t0, h, n } => write!(f, "uniform({t0},{h},{n})"),
            TimeScaleSpec::QScale { t0, q, n } => write!(f, "qscale({t0},{q},{n})"),
            TimeScaleSpec::Intervals {
                intervals,
                resolution,
            } => {
                let iv: Vec<String> = intervals.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
                write!(f, "intervals([{}],{resolution})", iv.join(","))
            }
            TimeScaleSpec::Explicit { points } => {
                let p: Vec<String> = points.iter().map(|x| x.to_string()).collect();
                write!(f, "explicit([{}])", p.join(","))
            }
        }
    }
}

/// Argument of a generator call: a number or a bracketed list.
#[derive(Debug, Clone, PartialEq)]
enum SpecArg {
    Num(f64),
    List(Vec<SpecArg>),
}

struct SpecParser<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> SpecParser<'s> {
    fn err(&self, msg: &str) -> Error {
        Error::Config(format!("time scale '{}': {msg} at offset {}", self.src, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> &'s str {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn arg(&mut self) -> Result<SpecArg> {
        if self.eat('[') {
            let mut items = Vec::new();
            if !self.eat(']') {
                loop {
                    items.push(self.arg()?);
                    if self.eat(']') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err(self.err("expected ',' or ']'"));
                    }
                }
            }
            return Ok(SpecArg::List(items));
        }
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..]
            .starts_with(|c: char| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
        {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map(SpecArg::Num)
            .map_err(|_| self.err("expected a number"))
    }
}

impl FromStr for TimeScaleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = SpecParser { src: s, pos: 0 };
        let name = p.ident().to_string();
        let mut args = Vec::new();
        if p.eat('(') && !p.eat(')') {
            loop {
                args.push(p.arg()?);
                if p.eat(')') {
                    break;
                }
                if !p.eat(',') {
                    return Err(p.err("expected ',' or ')'"));
                }
            }
        }
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        let num = |a: &SpecArg| match a {
            SpecArg::Num(x) => Ok(*x),
            SpecArg::List(_) => Err(Error::Config(format!("time scale '{s}': expected a number"))),
        };
        let count = |a: &SpecArg| {
            let x = num(a)?;
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(Error::Config(format!("time scale '{s}': expected a point count, got {x}")))
            }
        };
        let list = |a: &SpecArg| match a {
            SpecArg::List(v) => v.iter().map(num).collect::<Result<Vec<f64>>>(),
            SpecArg::Num(_) => Err(Error::Config(format!("time scale '{s}': expected a list"))),
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "time scale '{s}': {name} takes {n} argument(s), got {}",
                    args.len()
                )))
            }
        };
        match name.as_str() {
            "integer" => {
                arity(1)?;
                Ok(Self::Integer { n: count(&args[0])? })
            }
            "uniform" => {
                arity(3)?;
                Ok(Self::Uniform {
                    t0: num(&args[0])?,
                    h: num(&args[1])?,
                    n: count(&args[2])?,
                })
            }
            "qscale" => {
                arity(3)?;
                Ok(Self::QScale {
                    t0: num(&args[0])?,
                    q: num(&args[1])?,
                    n: count(&args[2])?,
                })
            }
            "intervals" => {
                arity(2)?;
                let SpecArg::List(items) = &args[0] else {
                    return Err(Error::Config(format!("time scale '{s}': expected a list of intervals")));
                };
                let intervals = items
                    .iter()
                    .map(|it| match list(it)?.as_slice() {
                        [a, b] => Ok((*a, *b)),
                        _ => Err(Error::Config(format!("time scale '{s}': intervals are [a,b] pairs"))),
                    })
                    .collect::<Result<_>>()?;
                Ok(Self::Intervals {
                    intervals,
                    resolution: num(&args[1])?,
                })
            }
            "explicit" => {
                arity(1)?;
                Ok(Self::Explicit {
                    points: list(&args[0])?,
                })
            }
            other => Err(Error::Config(format!("unknown time scale generator '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_scale() {
        let ts = TimeScale::<f64>::integer(10).unwrap();
        assert_eq!(ts.sigma(5.0).unwrap(), 6.0);
        assert_eq!(ts.mu(5.0).unwrap(), 1.0);
        assert_eq!(ts.classify(5.0).unwrap(), PointClass::RightScattered);
        assert_eq!(ts.sigma(10.0), Err(Error::NoSuccessor { t: 10.0 }));
        assert!(matches!(ts.sigma(2.5), Err(Error::UnknownPoint { .. })));
        assert_eq!(ts.classify(10.0).unwrap(), PointClass::Terminal);
    }

    #[test]
    fn qscale_jumps() {
        let ts = TimeScale::<f64>::qscale(1.0, 2.0, 6).unwrap();
        assert_eq!(ts.sigma(4.0).unwrap(), 8.0);
        assert_eq!(ts.mu(4.0).unwrap(), 4.0);
    }

    #[test]
    fn interval_union() {
        let ts = TimeScale::<f64>::intervals(&[(0.0, 1.0), (2.0, 3.0)], 0.1).unwrap();
        assert_eq!(ts.len(), 22);
        assert_eq!(ts.sigma(1.0).unwrap(), 2.0);
        assert!((ts.mu(0.5).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(ts.classify(0.5).unwrap(), PointClass::RightScattered);

        let fine = TimeScale::<f64>::intervals(&[(0.0, 1e-5)], 1e-7).unwrap();
        assert_eq!(fine.classify_at(3), PointClass::RightDense);
        assert!(fine.has_right_dense());
        assert!((fine.derivative_error_scale(3) - 1e-7).abs() < 1e-15);
    }

    #[test]
    fn construction_errors() {
        assert!(TimeScale::<f64>::explicit(vec![0.0]).is_err());
        assert!(TimeScale::<f64>::explicit(vec![0.0, 1.0, 1.0]).is_err());
        assert!(TimeScale::<f64>::intervals(&[(0.0, 1.0), (0.5, 2.0)], 0.1).is_err());
        assert!(TimeScale::<f64>::qscale(1.0, 0.5, 3).is_err());
        assert!(TimeScale::<f64>::uniform(0.0, -1.0, 3).is_err());
        assert!(TimeScale::<f64>::integer(3).unwrap().with_dense_threshold(0.0).is_err());
    }

    #[test]
    fn delta_derivatives() {
        let ts = TimeScale::<f64>::explicit((-5..=5).map(f64::from).collect()).unwrap();
        assert_eq!(ts.delta_derivative(|t| t * t, 3.0).unwrap(), 7.0);
        assert_eq!(ts.delta_derivative(|_| 4.2, 3.0).unwrap(), 0.0);
        let q = TimeScale::<f64>::qscale(1.0, 3.0, 5).unwrap();
        for &t in &q.points()[..5] {
            assert!((q.delta_derivative(|t| t, t).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(ts.delta_derivative(|t| t, 5.0).is_err());
    }

    #[test]
    fn dini_matches_delta_at_scattered_points() {
        let q = TimeScale::<f64>::qscale(1.0, 2.0, 6).unwrap();
        let f = |t: f64| (t * 0.3).sin() + t * t;
        for &t in &q.points()[..6] {
            assert_eq!(q.upper_dini(f, t).unwrap(), q.delta_derivative(f, t).unwrap());
        }
        assert_eq!(q.upper_dini(|_| 1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn dini_of_abs_on_dense_sampling() {
        let h = 1e-7;
        let ts = TimeScale::<f64>::explicit((-20..=20).map(|k| k as f64 * h).collect()).unwrap();
        // oracle: sup over the next eight forward quotients of |s| at 0
        let oracle = (1..=8)
            .map(|j| (j as f64 * h).abs() / (j as f64 * h))
            .fold(f64::NEG_INFINITY, f64::max);
        let d = ts.upper_dini(f64::abs, 0.0).unwrap();
        assert!((d - oracle).abs() < 1e-12);
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regressive_identities() {
        let ts = TimeScale::<f64>::integer(5).unwrap();
        let p = RegressiveFn::from_fn(&ts, |t| 0.1 * t + 0.2).unwrap();
        let zero = p.circle_minus(&p).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
        let one = RegressiveFn::constant(&ts, 1.0).unwrap();
        assert!(one.ominus().unwrap().values().iter().all(|&v| v == -0.5));
        assert!(matches!(
            RegressiveFn::constant(&ts, -1.0),
            Err(Error::NonRegressive { t }) if t == 0.0
        ));
        assert_eq!(p.eval(2.0).unwrap(), 0.4);
        assert!(p.eval(5.0).is_err());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "integer(50)",
            "uniform(0,0.5,10)",
            "qscale(1,2,8)",
            "intervals([[0,1],[2,3]],0.1)",
            "explicit([0,0.5,2])",
        ] {
            let spec: TimeScaleSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            assert!(TimeScale::<f64>::from_spec(&spec).is_ok());
        }
        assert_eq!(
            " intervals ( [ [0, 1] , [2,3] ], 0.1 ) ".parse::<TimeScaleSpec>().unwrap(),
            TimeScaleSpec::Intervals {
                intervals: vec![(0.0, 1.0), (2.0, 3.0)],
                resolution: 0.1
            }
        );
        assert!("integer(2.5)".parse::<TimeScaleSpec>().is_err());
        assert!("integer(1,2)".parse::<TimeScaleSpec>().is_err());
        assert!("cantor(3)".parse::<TimeScaleSpec>().is_err());
        assert!("explicit([0,1]".parse::<TimeScaleSpec>().is_err());
    }
}
