//! Solution paths for `LCP(M, q)`: find `z >= 0` with `w = Mz + q >= 0`
//! and `z^T w = 0`.

mod augmented;
mod block;
mod least;
mod lemke;
mod oracle;
mod reduction;
mod sample;

pub use augmented::{build_augmented, check_augmented_certificate, solve_augmented, AugmentedInstance, AugmentedOutcome};
pub use block::solve_block_sequential;
pub use least::{least_element, least_element_with, LeastElement};
pub use lemke::{solve_lemke, solve_lemke_with_covering, LemkeOutcome, RayTermination};
pub use oracle::{solve_bruteforce, ORACLE_LIMIT};
pub use reduction::{derive_p_block_triangular, derive_p_hidden, solve_lp_reduction, HiddenP, Reduction};
pub use sample::sample_feasible;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, max_abs_diff, min_of, norm2, BlockPartition, Matrix};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct HiddenWitness {
    pub x: Matrix,
    pub y: Matrix,
}

/// The pair `(M, q)` plus optional block structure and hidden witnesses.
///
/// Witnesses are only checked for shape here; `derive_p_hidden` and the
/// classifier verify `NX = Y` and the block structure on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct LcpInstance {
    pub m: Matrix,
    pub q: Vec<f64>,
    pub partition: Option<BlockPartition>,
    pub witnesses: Option<HiddenWitness>,
}

impl LcpInstance {
    pub fn new(m: Matrix, q: Vec<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("M is {}x{}, expected square", m.rows(), m.cols())));
        }
        if q.len() != m.rows() {
            return Err(Error::Dimension(format!("q has length {}, M has dimension {}", q.len(), m.rows())));
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::Dimension("q has non-finite entries".into()));
        }
        Ok(Self { m, q, partition: None, witnesses: None })
    }

    pub fn with_partition(mut self, partition: BlockPartition) -> Result<Self> {
        if partition.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "partition covers dimension {}, M has {}",
                partition.dim(),
                self.dim()
            )));
        }
        self.partition = Some(partition);
        Ok(self)
    }

    pub fn with_witnesses(mut self, x: Matrix, y: Matrix) -> Result<Self> {
        let n = self.dim();
        for (name, w) in [("X", &x), ("Y", &y)] {
            if w.rows() != n || w.cols() != n {
                return Err(Error::Dimension(format!("{name} is {}x{}, expected {n}x{n}", w.rows(), w.cols())));
            }
        }
        self.witnesses = Some(HiddenWitness { x, y });
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn with_q(&self, q: Vec<f64>) -> Result<Self> {
        let mut inst = LcpInstance::new(self.m.clone(), q)?;
        inst.partition = self.partition;
        inst.witnesses = self.witnesses.clone();
        Ok(inst)
    }

    /// `Mz + q`.
    pub fn slack(&self, z: &[f64]) -> Vec<f64> {
        let mut w = self.m.mul_vec(z);
        for (wi, qi) in w.iter_mut().zip(&self.q) {
            *wi += qi;
        }
        w
    }

    /// Largest violation of `z >= 0, Mz + q >= 0`.
    pub fn infeasibility(&self, z: &[f64]) -> f64 {
        let w = self.slack(z);
        (-min_of(z)).max(-min_of(&w)).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Lemke,
    LpReduction,
    BlockSequential,
    Oracle,
    Augmented,
    LeastElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    /// `min(min z, min w)`; negative values are feasibility violations.
    pub min_entry: f64,
    /// `z^T w`.
    pub complementarity: f64,
    /// `||w - Mz - q||_inf`.
    pub equation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcpSolution {
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub method: Method,
    pub residuals: Residuals,
    /// Optimal LP dual, for the LP-based paths.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<f64>>,
}

impl LcpSolution {
    pub fn new(inst: &LcpInstance, z: Vec<f64>, w: Vec<f64>, method: Method) -> Self {
        let mz = inst.slack(&z);
        let residuals = Residuals {
            min_entry: min_of(&z).min(min_of(&w)),
            complementarity: dot(&z, &w),
            equation: max_abs_diff(&w, &mz),
        };
        Self { z, w, method, residuals, dual: None }
    }

    /// Takes `w = Mz + q`.
    pub fn from_z(inst: &LcpInstance, z: Vec<f64>, method: Method) -> Self {
        let w = inst.slack(&z);
        Self::new(inst, z, w, method)
    }

    /// Sign, equation, and complementarity contract with complementarity
    /// tolerance `tol` (relative to `1 + ||z|| ||w||`).
    pub fn meets_contract_with(&self, tol: f64) -> bool {
        let r = &self.residuals;
        r.min_entry >= -1e-9
            && r.equation <= tol::FEASIBLE
            && r.complementarity.abs() <= tol * (1.0 + norm2(&self.z) * norm2(&self.w))
    }

    pub fn meets_contract(&self) -> bool {
        self.meets_contract_with(tol::assertion_tolerance())
    }
}

/// Residuals of a candidate `z`, with `w = Mz + q`.
pub fn complementarity_residual(inst: &LcpInstance, z: &[f64]) -> Result<Residuals> {
    if z.len() != inst.dim() {
        return Err(Error::Dimension(format!("z has length {}, expected {}", z.len(), inst.dim())));
    }
    Ok(LcpSolution::from_z(inst, z.to_vec(), Method::Oracle).residuals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_of_exact_and_infeasible_points() {
        let inst = LcpInstance::new(Matrix::identity(2), vec![-1.0, -2.0]).unwrap();
        let r = complementarity_residual(&inst, &[1.0, 2.0]).unwrap();
        assert!(r.min_entry.abs() <= 1e-9 && r.complementarity.abs() <= 1e-9 && r.equation == 0.0);
        let r = complementarity_residual(&inst, &[0.0, 0.0]).unwrap();
        assert_eq!(r.min_entry, -2.0);
        assert!(complementarity_residual(&inst, &[0.0]).is_err());
    }

    #[test]
    fn instance_shape_checks() {
        assert!(LcpInstance::new(Matrix::identity(2), vec![1.0]).is_err());
        let inst = LcpInstance::new(Matrix::identity(2), vec![1.0, 1.0]).unwrap();
        assert!(inst.clone().with_witnesses(Matrix::identity(3), Matrix::identity(2)).is_err());
        let part = BlockPartition::new(1, 3, crate::Orientation::Lower).unwrap();
        assert!(inst.with_partition(part).is_err());
    }
}
