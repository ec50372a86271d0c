use super::grid::AlphaGrid;
use super::number::FuzzyNumber;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element of `R_F^n` with box-valued level sets: one fuzzy number per axis.
///
/// Distances use the max-norm on `R^n`, so `D_∞` is the largest
/// component-wise `d_∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyVector<T> {
    components: Vec<FuzzyNumber<T>>,
}

impl<T: Scalar> FuzzyVector<T> {
    pub fn new(components: Vec<FuzzyNumber<T>>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidShape("fuzzy vector needs at least one component".into()))?;
        if components.iter().any(|c| c.grid() != first.grid()) {
            return Err(Error::IncompatibleGrids);
        }
        Ok(Self { components })
    }

    pub fn scalar(u: FuzzyNumber<T>) -> Self {
        Self { components: vec![u] }
    }

    pub fn crisp(values: &[T], grid: &AlphaGrid<T>) -> Result<Self> {
        Self::new(values.iter().map(|&x| FuzzyNumber::crisp(x, grid)).collect())
    }

    pub fn zero(grid: &AlphaGrid<T>, dim: usize) -> Result<Self> {
        Self::new(vec![FuzzyNumber::zero(grid); dim])
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn grid(&self) -> &AlphaGrid<T> {
        self.components[0].grid()
    }

    pub fn components(&self) -> &[FuzzyNumber<T>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &FuzzyNumber<T> {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<FuzzyNumber<T>> {
        self.components
    }

    pub fn is_crisp(&self) -> bool {
        self.components.iter().all(FuzzyNumber::is_crisp)
    }

    fn zip_with<F>(&self, other: &Self, mut op: F) -> Result<Self>
    where
        F: FnMut(&FuzzyNumber<T>, &FuzzyNumber<T>) -> Result<FuzzyNumber<T>>,
    {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| op(a, b))
            .collect::<Result<_>>()?;
        Ok(Self { components })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, FuzzyNumber::add)
    }

    pub fn scale(&self, k: T) -> Self {
        Self {
            components: self.components.iter().map(|c| c.scale(k)).collect(),
        }
    }

    /// Component-wise gH-difference; fails if any component's difference is undefined.
    pub fn gh_difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, FuzzyNumber::gh_difference)
    }

    pub fn hukuhara_difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, FuzzyNumber::hukuhara_difference)
    }

    /// `D_∞(u, v)`
    pub fn dist(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        self.components
            .iter()
            .zip(&other.components)
            .try_fold(T::zero(), |acc, (a, b)| Ok(acc.max(a.dist(b)?)))
    }

    /// `‖u‖ = D_∞(u, 0̃)`
    pub fn norm(&self) -> T {
        self.components
            .iter()
            .map(FuzzyNumber::magnitude)
            .fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dim() == other.dim()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// `D_∞(u, v)` for fuzzy vectors.
pub fn vec_dist<T: Scalar>(u: &FuzzyVector<T>, v: &FuzzyVector<T>) -> Result<T> {
    u.dist(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(a: f64, b: f64, c: f64) -> FuzzyNumber<f64> {
        FuzzyNumber::triangular(a, b, c, &AlphaGrid::default()).unwrap()
    }

    #[test]
    fn component_wise_distance() {
        let g = AlphaGrid::default();
        let u = FuzzyVector::new(vec![tri(0.0, 1.0, 2.0), FuzzyNumber::zero(&g)]).unwrap();
        let v = FuzzyVector::new(vec![tri(3.0, 4.0, 5.0), FuzzyNumber::zero(&g)]).unwrap();
        assert_eq!(vec_dist(&u, &u).unwrap(), 0.0);
        assert!((vec_dist(&u, &v).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(u.norm(), 2.0);
    }

    #[test]
    fn single_component_matches_scalar_dist() {
        let a = tri(-1.0, 0.2, 0.7);
        let b = tri(0.5, 1.0, 4.0);
        let d = vec_dist(&FuzzyVector::scalar(a.clone()), &FuzzyVector::scalar(b.clone())).unwrap();
        assert_eq!(d, a.dist(&b).unwrap());
    }

    #[test]
    fn norm_examples() {
        let g = AlphaGrid::default();
        assert_eq!(FuzzyVector::<f64>::zero(&g, 3).unwrap().norm(), 0.0);
        assert_eq!(FuzzyVector::scalar(tri(-1.0, 0.0, 1.0)).norm(), 1.0);
        let u = FuzzyVector::new(vec![tri(-1.0, 0.0, 3.0), tri(-2.0, 0.0, 0.5)]).unwrap();
        assert_eq!(u.scale(-2.5).norm(), 2.5 * u.norm());
    }

    #[test]
    fn errors() {
        let g = AlphaGrid::default();
        assert!(FuzzyVector::<f64>::new(vec![]).is_err());
        assert_eq!(
            FuzzyVector::new(vec![FuzzyNumber::zero(&g), FuzzyNumber::zero(&AlphaGrid::uniform(3).unwrap())]),
            Err(Error::IncompatibleGrids)
        );
        let a = FuzzyVector::<f64>::zero(&g, 2).unwrap();
        let b = FuzzyVector::<f64>::zero(&g, 3).unwrap();
        assert!(matches!(a.dist(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
    }
}
