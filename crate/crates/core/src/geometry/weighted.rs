use serde::{Deserialize, Serialize};

use super::{BlockPartition, ReferenceFunction};
use crate::{Error, Result};

/// `H(x) = sum_i L_i h_i(x_i)`; the block weights are relative-smoothness constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedReference {
    partition: BlockPartition,
    refs: Vec<ReferenceFunction>,
    weights: Vec<f64>,
}

impl WeightedReference {
    pub fn new(
        partition: BlockPartition,
        refs: Vec<ReferenceFunction>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let n = partition.n_blocks();
        if refs.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: refs.len(),
            });
        }
        if weights.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: weights.len(),
            });
        }
        if let Some(i) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::invalid(format!(
                "weight of block {i} must be positive and finite, got {}",
                weights[i]
            )));
        }
        Ok(Self {
            partition,
            refs,
            weights,
        })
    }

    /// Same reference function on every block.
    pub fn uniform(partition: BlockPartition, h: ReferenceFunction, weights: Vec<f64>) -> Result<Self> {
        let refs = vec![h; partition.n_blocks()];
        Self::new(partition, refs, weights)
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn refs(&self) -> &[ReferenceFunction] {
        &self.refs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn reference(&self, block: usize) -> ReferenceFunction {
        self.refs[block]
    }

    pub fn weight(&self, block: usize) -> f64 {
        self.weights[block]
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.partition.clone(), self.refs.clone(), weights)
    }

    /// Weight of the block owning each flat coordinate.
    pub fn coordinate_weights(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.partition.dim()];
        for b in 0..self.partition.n_blocks() {
            out[self.partition.range(b)].fill(self.weights[b]);
        }
        out
    }

    pub fn check_domain(&self, x: &[f64]) -> Result<()> {
        self.partition.check_len(x.len())?;
        for b in 0..self.partition.n_blocks() {
            let r = self.partition.range(b);
            let offset = r.start;
            self.refs[b].check_domain(&x[r]).map_err(|e| match e {
                Error::Domain { what, index, value } => Error::Domain {
                    what,
                    index: index + offset,
                    value,
                },
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn block_distance(&self, block: usize, u: &[f64], x: &[f64]) -> Result<f64> {
        Ok(self.weights[block] * self.refs[block].distance(u, x)?)
    }

    /// `D_H(u, x) = sum_i L_i D_{h_i}(u_i, x_i)`.
    pub fn distance(&self, u: &[f64], x: &[f64]) -> Result<f64> {
        self.partition.check_len(u.len())?;
        self.check_domain(u)?;
        self.check_domain(x)?;
        Ok(self.distance_unchecked(u, x))
    }

    pub(crate) fn distance_unchecked(&self, u: &[f64], x: &[f64]) -> f64 {
        (0..self.partition.n_blocks())
            .map(|b| {
                let r = self.partition.range(b);
                self.weights[b] * self.refs[b].distance_unchecked(&u[r.clone()], &x[r])
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ReferenceFunction::*;

    #[test]
    fn identical_points_have_zero_distance() {
        let h = WeightedReference::uniform(BlockPartition::scalar(3).unwrap(), ShannonEntropy, vec![1.0, 2.0, 3.0])
            .unwrap();
        let x = [0.3, 4.0, 1.5];
        assert_eq!(h.distance(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn weighted_half_squares() {
        let h = WeightedReference::uniform(BlockPartition::scalar(2).unwrap(), SquaredEuclidean, vec![2.0, 3.0])
            .unwrap();
        assert_eq!(h.distance(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), 2.5);
    }

    #[test]
    fn scales_single_shannon_block() {
        let h = WeightedReference::uniform(BlockPartition::scalar(1).unwrap(), ShannonEntropy, vec![4.0]).unwrap();
        let d = h.distance(&[2.0], &[1.0]).unwrap();
        assert!((d - 4.0 * (2.0 * 2f64.ln() - 1.0)).abs() < 1e-14);
        assert!((d - 1.545177444479562).abs() < 1e-12);
    }

    #[test]
    fn equals_sum_of_block_distances() {
        let p = BlockPartition::new(vec![2, 1, 3]).unwrap();
        let h = WeightedReference::new(p.clone(), vec![SquaredEuclidean, BurgEntropy, ShannonEntropy], vec![0.5, 2.0, 7.0])
            .unwrap();
        let u = [1.0, -2.0, 0.4, 2.0, 0.1, 3.0];
        let x = [0.0, 1.0, 1.3, 1.0, 0.5, 2.5];
        let total: f64 = (0..3)
            .map(|b| h.block_distance(b, &u[p.range(b)], &x[p.range(b)]).unwrap())
            .sum();
        assert!((h.distance(&u, &x).unwrap() - total).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_weights_and_offsets_domain_errors() {
        let p = BlockPartition::scalar(2).unwrap();
        assert!(WeightedReference::uniform(p.clone(), BurgEntropy, vec![1.0, 0.0]).is_err());
        assert!(WeightedReference::uniform(p.clone(), BurgEntropy, vec![1.0]).is_err());
        let h = WeightedReference::uniform(p, BurgEntropy, vec![1.0, 1.0]).unwrap();
        let err = h.distance(&[1.0, -1.0], &[1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::Domain { index: 1, .. }));
        assert!(matches!(h.distance(&[1.0], &[1.0, 1.0]), Err(Error::Dimension { .. })));
    }
}
