use super::{derive_p_hidden, solve_lemke, LcpInstance, LcpSolution, LemkeOutcome, Method, RayTermination};
use crate::error::{Error, Result};
use crate::linalg::{add_vec, min_of, Matrix};
use crate::tol;

/// `LCP(𝒩, q̄)` with `𝒩 = [[0, -N^T], [N, 0]]` and `q̄ = (r + N^T s, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedInstance {
    pub matrix: Matrix,
    pub q_bar: Vec<f64>,
    pub base_dim: usize,
}

impl AugmentedInstance {
    /// The lower-left block `N`.
    pub fn base(&self) -> Matrix {
        let n = self.base_dim;
        Matrix::from_fn(n, n, |i, j| self.matrix.get(n + i, j))
    }

    pub fn as_instance(&self) -> Result<LcpInstance> {
        LcpInstance::new(self.matrix.clone(), self.q_bar.clone())
    }
}

pub fn build_augmented(inst: &LcpInstance, r: &[f64], s: &[f64]) -> Result<AugmentedInstance> {
    let n = inst.dim();
    if r.len() != n || s.len() != n {
        return Err(Error::Dimension(format!("r, s must have length {n}")));
    }
    let nm = &inst.m;
    let matrix = Matrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => -nm.get(j - n, i),
        (false, true) => nm.get(i - n, j),
        _ => 0.0,
    });
    let mut q_bar = add_vec(r, &nm.tr_mul_vec(s));
    q_bar.extend_from_slice(&inst.q);
    Ok(AugmentedInstance { matrix, q_bar, base_dim: n })
}

/// Evaluates `(I - N^T) y + p > 0` at a feasible point `(x, y)` of the
/// augmented instance.
pub fn check_augmented_certificate(aug: &AugmentedInstance, x: &[f64], y: &[f64], p: &[f64]) -> Result<bool> {
    let n = aug.base_dim;
    if x.len() != n || y.len() != n || p.len() != n {
        return Err(Error::Dimension(format!("x, y, p must have length {n}")));
    }
    let mut point = x.to_vec();
    point.extend_from_slice(y);
    let slack = add_vec(&aug.matrix.mul_vec(&point), &aug.q_bar);
    let violation = (-min_of(&point)).max(-min_of(&slack));
    if violation > tol::FEASIBLE {
        return Err(Error::InfeasiblePoint { violation });
    }
    let nty = aug.base().tr_mul_vec(y);
    Ok((0..n).all(|i| y[i] - nty[i] + p[i] > tol::CERTIFICATE))
}

#[derive(Debug, Clone, PartialEq)]
pub enum AugmentedOutcome {
    /// Lemke solved the augmented instance and its x-part solves `LCP(N, q)`.
    Solved { solution: LcpSolution, augmented: LcpSolution },
    /// Lemke solved the augmented instance but the x-part fails the contract.
    InvalidXPart { candidate: LcpSolution, augmented: LcpSolution },
    /// Lemke ended on a secondary ray of the augmented instance.
    Ray(RayTermination),
}

impl AugmentedOutcome {
    pub fn solution(&self) -> Option<&LcpSolution> {
        match self {
            AugmentedOutcome::Solved { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

/// Builds the augmented instance from `derive_p_hidden`'s `(r, s)`, runs
/// Lemke on it, and reads off the x-part.
pub fn solve_augmented(inst: &LcpInstance) -> Result<AugmentedOutcome> {
    let h = derive_p_hidden(inst)?;
    let aug = build_augmented(inst, &h.r, &h.s)?;
    let n = inst.dim();
    match solve_lemke(&aug.as_instance()?)? {
        LemkeOutcome::Ray(ray) => Ok(AugmentedOutcome::Ray(ray)),
        LemkeOutcome::Solved(augmented) => {
            let candidate = LcpSolution::from_z(inst, augmented.z[..n].to_vec(), Method::Augmented);
            if candidate.meets_contract_with(1e-6) {
                Ok(AugmentedOutcome::Solved { solution: candidate, augmented })
            } else {
                Ok(AugmentedOutcome::InvalidXPart { candidate, augmented })
            }
        }
    }
}
