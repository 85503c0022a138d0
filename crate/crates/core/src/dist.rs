//! Weight distributions: counts indexed by the number of filled cells.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::plr::Shape;

/// Exact non-negative count.
pub type BigCount = BigUint;

/// `counts[m]` for `m = 0..=r*s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightDistribution {
    shape: Shape,
    counts: Vec<BigCount>,
}

impl WeightDistribution {
    pub fn zeros(shape: Shape) -> Self {
        WeightDistribution { shape, counts: vec![BigCount::zero(); shape.cells() + 1] }
    }

    pub fn from_counts(shape: Shape, counts: Vec<BigCount>) -> Result<Self> {
        if counts.len() != shape.cells() + 1 {
            return Err(Error::ShapeMismatch(format!(
                "{shape} needs {} counts, got {}",
                shape.cells() + 1,
                counts.len()
            )));
        }
        Ok(WeightDistribution { shape, counts })
    }

    /// Builds a distribution from machine integers.
    pub fn from_u64(shape: Shape, counts: &[u64]) -> Result<Self> {
        WeightDistribution::from_counts(shape, counts.iter().map(|&c| c.into()).collect())
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn counts(&self) -> &[BigCount] {
        &self.counts
    }

    /// Count at weight `m`; zero beyond `r*s`.
    pub fn get(&self, m: usize) -> BigCount {
        self.counts.get(m).cloned().unwrap_or_default()
    }

    pub fn add_at(&mut self, m: usize, c: &BigCount) {
        self.counts[m] += c;
    }

    pub fn total(&self) -> BigCount {
        self.counts.iter().sum()
    }

    /// Highest weight with a non-zero count.
    pub fn max_weight(&self) -> usize {
        self.counts.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Re-labels the distribution with another shape, padding or dropping
    /// trailing weights; dropped weights must have zero count.
    pub fn with_shape(mut self, shape: Shape) -> Result<Self> {
        let len = shape.cells() + 1;
        if self.counts.iter().skip(len).any(|c| !c.is_zero()) {
            return Err(Error::ShapeMismatch(format!("{} has weights beyond {shape}", self.shape)));
        }
        self.counts.resize(len, BigCount::zero());
        self.shape = shape;
        Ok(self)
    }
}

impl AddAssign<&WeightDistribution> for WeightDistribution {
    fn add_assign(&mut self, o: &WeightDistribution) {
        assert_eq!(self.counts.len(), o.counts.len(), "distribution lengths differ");
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            *a += b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_of_range_weight_is_zero() {
        let sh = Shape::new(1, 1, 3).unwrap();
        let d = WeightDistribution::from_u64(sh, &[1, 3]).unwrap();
        assert_eq!(d.get(5), BigCount::zero());
        assert_eq!(d.total(), 4u32.into());
        assert_eq!(d.max_weight(), 1);
        assert!(WeightDistribution::from_u64(sh, &[1]).is_err());
    }
}
