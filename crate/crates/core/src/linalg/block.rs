use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::matrix::Matrix;

/// Which side of the block diagonal is forced to zero.
///
/// `Lower` means every block strictly above the block diagonal is zero
/// (`M_ij = 0` for `i < j`); `Upper` means every block strictly below is
/// zero. The orientation is stored as this zero pattern rather than as a
/// name, because the literature is not consistent about which of the two
/// is called "upper".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Lower,
    Upper,
}

impl Orientation {
    /// Whether block `(i, j)` must be zero under this orientation.
    pub fn is_zero_block(self, i: usize, j: usize) -> bool {
        match self {
            Orientation::Lower => i < j,
            Orientation::Upper => i > j,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    pub block_size: usize,
    pub block_count: usize,
    pub orientation: Orientation,
}

impl BlockPartition {
    pub fn new(block_size: usize, block_count: usize, orientation: Orientation) -> Result<Self> {
        if block_size == 0 || block_count == 0 {
            return Err(Error::Dimension("block size and block count must be positive".into()));
        }
        Ok(Self { block_size, block_count, orientation })
    }

    /// Partition of a `dim x dim` matrix into blocks of size `block_size`.
    pub fn for_dim(dim: usize, block_size: usize, orientation: Orientation) -> Result<Self> {
        if block_size == 0 || !dim.is_multiple_of(block_size) {
            return Err(Error::Dimension(format!("block size {block_size} does not divide dimension {dim}")));
        }
        Self::new(block_size, dim / block_size, orientation)
    }

    pub fn dim(&self) -> usize {
        self.block_size * self.block_count
    }

    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        i * self.block_size..(i + 1) * self.block_size
    }

    fn check(&self, m: &Matrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.dim() {
            return Err(Error::Dimension(format!(
                "partition {}x{} does not fit a {}x{} matrix",
                self.block_count,
                self.block_size,
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }
}

/// Block `(i, j)` (0-based) of `m`.
pub fn extract_block(m: &Matrix, part: &BlockPartition, i: usize, j: usize) -> Result<Matrix> {
    part.check(m)?;
    for idx in [i, j] {
        if idx >= part.block_count {
            return Err(Error::OutOfRange { index: idx, dim: part.block_count });
        }
    }
    let b = part.block_size;
    Ok(Matrix::from_fn(b, b, |r, c| m.get(i * b + r, j * b + c)))
}

/// Whether every block on the zero side of `orientation` is exactly zero.
pub fn has_zero_pattern(m: &Matrix, part: &BlockPartition, orientation: Orientation) -> Result<bool> {
    part.check(m)?;
    let b = part.block_size;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if orientation.is_zero_block(i / b, j / b) && m.get(i, j) != 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Assembles a matrix from a block-size and a generator of blocks.
pub fn assemble(block_size: usize, block_count: usize, mut block: impl FnMut(usize, usize) -> Matrix) -> Matrix {
    let b = block_size;
    let n = b * block_count;
    let mut data = vec![0.0; n * n];
    for bi in 0..block_count {
        for bj in 0..block_count {
            let blk = block(bi, bj);
            assert_eq!((blk.rows(), blk.cols()), (b, b), "assemble: block shape");
            for r in 0..b {
                for c in 0..b {
                    data[(bi * b + r) * n + bj * b + c] = blk.get(r, c);
                }
            }
        }
    }
    Matrix::new(n, n, data).expect("assembled blocks are finite")
}

/// Index map reversing the block order while keeping the order within a block.
fn reversed_index(dim: usize, block_size: usize) -> Vec<usize> {
    let count = dim / block_size;
    (0..dim)
        .map(|k| (count - 1 - k / block_size) * block_size + k % block_size)
        .collect()
}

/// `P M P` with `P` the block-reversal permutation. Maps an `Upper`
/// zero pattern onto a `Lower` one and back.
pub fn reverse_blocks(m: &Matrix, block_size: usize) -> Matrix {
    let p = reversed_index(m.rows(), block_size);
    Matrix::from_fn(m.rows(), m.cols(), |i, j| m.get(p[i], p[j]))
}

/// `P v` with the same permutation as [`reverse_blocks`].
pub fn reverse_block_vec(v: &[f64], block_size: usize) -> Vec<f64> {
    let p = reversed_index(v.len(), block_size);
    p.iter().map(|&k| v[k]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extract_identity_block() {
        let part = BlockPartition::for_dim(4, 2, Orientation::Lower).unwrap();
        assert_eq!(extract_block(&Matrix::identity(4), &part, 0, 0).unwrap(), Matrix::identity(2));
        assert!(extract_block(&Matrix::identity(4), &part, 2, 0).is_err());
        assert!(BlockPartition::for_dim(5, 2, Orientation::Lower).is_err());
    }

    #[test]
    fn reversal_swaps_orientation() {
        let m = Matrix::from_rows(&[
            [1.0, 2.0, 0.0, 0.0],
            [3.0, 4.0, 0.0, 0.0],
            [5.0, 6.0, 7.0, 8.0],
            [9.0, 1.0, 2.0, 3.0],
        ])
        .unwrap();
        let part = BlockPartition::for_dim(4, 2, Orientation::Lower).unwrap();
        assert!(has_zero_pattern(&m, &part, Orientation::Lower).unwrap());
        let r = reverse_blocks(&m, 2);
        assert!(has_zero_pattern(&r, &part, Orientation::Upper).unwrap());
        assert_eq!(r.row(0), &[7.0, 8.0, 5.0, 6.0]);
        assert_eq!(reverse_blocks(&r, 2), m);
        assert_eq!(reverse_block_vec(&[1.0, 2.0, 3.0, 4.0], 2), vec![3.0, 4.0, 1.0, 2.0]);
    }
}
