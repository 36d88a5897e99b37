use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Decomposition of an `N`-vector into `n` contiguous blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    dim: usize,
}

impl BlockPartition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::invalid("a partition needs at least one block"));
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::invalid(format!("block {i} is empty")));
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut dim = 0;
        for &s in &sizes {
            offsets.push(dim);
            dim += s;
        }
        Ok(Self { sizes, offsets, dim })
    }

    /// One coordinate per block.
    pub fn scalar(dim: usize) -> Result<Self> {
        Self::new(vec![1; dim])
    }

    /// Blocks of `block_size` coordinates; the last block takes the remainder.
    pub fn uniform(dim: usize, block_size: usize) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::invalid("block size must be positive"));
        }
        let mut sizes = vec![block_size; dim / block_size];
        if dim % block_size != 0 {
            sizes.push(dim % block_size);
        }
        Self::new(sizes)
    }

    pub fn n_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn range(&self, block: usize) -> Range<usize> {
        let start = self.offsets[block];
        start..start + self.sizes[block]
    }

    /// Block owning flat index `index`.
    pub fn block_of(&self, index: usize) -> Option<usize> {
        if index >= self.dim {
            return None;
        }
        Some(self.offsets.partition_point(|&o| o <= index) - 1)
    }

    pub fn is_scalar(&self) -> bool {
        self.sizes.len() == self.dim
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }
}
