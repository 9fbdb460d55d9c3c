//! Linear complementarity problems with block triangular K-matrices and
//! hidden block triangular K-matrices.
//!
//! Given `M` and `q`, `LCP(M, q)` asks for `z >= 0` with `w = Mz + q >= 0`
//! and `z^T w = 0`. The crate provides:
//!
//! - [`linalg`]: dense matrices, block partitions, determinants, inverses,
//!   Perron roots;
//! - [`classify`]: Z/P/K/PSD/S predicates and the block triangular and
//!   hidden block triangular K tests, each with a certificate;
//! - [`lp`]: a two-phase Bland-rule simplex that also returns duals;
//! - [`game`]: matrix-game values and strictly positive strategies;
//! - [`lcp`]: Lemke's method, the LP reductions, the sequential block
//!   solver, least elements, the skew-symmetric augmented formulation, and
//!   a brute-force complementary-basis oracle;
//! - [`generate`], [`instance`], [`verify`]: instance generators, the JSON
//!   instance format, and the property suites driven by the `lcpk` CLI.

pub mod classify;
pub mod error;
pub mod game;
pub mod generate;
pub mod instance;
pub mod lcp;
pub mod linalg;
pub mod lp;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{BlockPartition, Matrix, Orientation};
