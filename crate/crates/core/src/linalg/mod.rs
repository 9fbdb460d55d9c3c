//! Dense matrices, block bookkeeping, and the small set of
//! factorizations the solvers need.

mod block;
mod dense;
mod matrix;
mod perron;

pub use block::{
    assemble, extract_block, has_zero_pattern, reverse_block_vec, reverse_blocks, BlockPartition,
    Orientation,
};
pub use dense::{det, inverse, is_diagonally_dominant, meet, principal_submatrix, solve};
pub use matrix::{add_vec, dot, max_abs_diff, min_of, norm2, Matrix};
pub use perron::perron_root;
