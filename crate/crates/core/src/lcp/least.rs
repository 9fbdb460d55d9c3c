use serde::Serialize;

use super::{sample_feasible, LcpInstance, LcpSolution, Method};
use crate::classify::{is_block_triangular_k, Strictness};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeastElement {
    pub solution: LcpSolution,
    pub samples_checked: usize,
}

/// `least_element_with(inst, 100, 0)`.
pub fn least_element(inst: &LcpInstance) -> Result<LeastElement> {
    least_element_with(inst, 100, 0)
}

/// Minimizer of `e^T z` over `FEA(M, q)`, checked to be below every one of
/// `samples` sampled feasible points and to solve the LCP.
pub fn least_element_with(inst: &LcpInstance, samples: usize, seed: u64) -> Result<LeastElement> {
    let bs = inst.partition.map_or(inst.dim(), |p| p.block_size);
    let check = is_block_triangular_k(&inst.m, bs, Strictness::Relaxed)?;
    if !check.holds {
        return Err(Error::ClassCheck(check.failure.unwrap_or_else(|| "not block triangular K".into())));
    }
    let n = inst.dim();
    let b: Vec<f64> = inst.q.iter().map(|v| -v).collect();
    let sol = solve_lp(&LpProblem::new(vec![1.0; n], inst.m.clone(), b)?)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::Infeasible),
        LpStatus::Unbounded => return Err(Error::NumericalBreakdown("e^T z unbounded on a nonnegative set".into())),
    }
    let mut solution = LcpSolution::from_z(inst, sol.x, Method::LeastElement);
    solution.dual = Some(sol.y);
    if !solution.meets_contract() {
        return Err(Error::NotLeast(format!("minimizer does not solve the LCP: {:?}", solution.residuals)));
    }
    let points = sample_feasible(&inst.m, &inst.q, samples, seed)?;
    for (k, p) in points.iter().enumerate() {
        if let Some(i) = (0..n).find(|&i| solution.z[i] > p[i] + tol::FEASIBLE) {
            return Err(Error::NotLeast(format!(
                "sample {k} has coordinate {i} = {:e} below the minimizer's {:e}",
                p[i], solution.z[i]
            )));
        }
    }
    Ok(LeastElement { solution, samples_checked: points.len() })
}
