use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_LEVELS: usize = 11;

/// Ordered α levels `0 = α₀ < α₁ < … < α_{M−1} = 1`, shared by reference.
#[derive(Debug, Clone)]
pub struct AlphaGrid<T> {
    levels: Arc<[T]>,
}

impl<T: Scalar> AlphaGrid<T> {
    pub fn new(levels: Vec<T>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 levels, got {}",
                levels.len()
            )));
        }
        if levels[0] != T::zero() || levels[levels.len() - 1] != T::one() {
            return Err(Error::InvalidGrid(
                "first level must be exactly 0 and last exactly 1".into(),
            ));
        }
        if levels.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid("levels must be strictly increasing".into()));
        }
        Ok(Self {
            levels: levels.into(),
        })
    }

    /// `m` equally spaced levels from 0 to 1.
    pub fn uniform(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 levels, got {m}")));
        }
        let denom = T::lit((m - 1) as f64);
        let mut levels: Vec<T> = (0..m).map(|i| T::lit(i as f64) / denom).collect();
        levels[m - 1] = T::one();
        Self::new(levels)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn alpha(&self, i: usize) -> T {
        self.levels[i]
    }
}

impl<T: Scalar> Default for AlphaGrid<T> {
    fn default() -> Self {
        Self::uniform(DEFAULT_LEVELS).expect("default grid is valid")
    }
}

impl<T: PartialEq> PartialEq for AlphaGrid<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.levels, &other.levels) || self.levels[..] == other.levels[..]
    }
}
