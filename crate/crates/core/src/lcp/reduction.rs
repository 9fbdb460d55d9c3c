use serde::Serialize;

use super::{LcpInstance, LcpSolution, Method};
use crate::classify::{is_block_triangular_k, verify_hidden_block_triangular_k, Strictness};
use crate::error::{Error, Result};
use crate::game::positive_value_vector;
use crate::linalg::{add_vec, min_of, Matrix};
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reduction {
    pub solution: LcpSolution,
    /// `(I - M^T) y + p > 0` held strictly.
    pub certified: bool,
    /// Smallest coordinate of `(I - M^T) y + p`.
    pub certificate_min: f64,
}

/// `min p^T z  s.t.  Mz + q >= 0, z >= 0`, then the dual check
/// `(I - M^T) y + p > 0`, under which the minimizer solves the LCP.
///
/// An uncertified point is still returned (with `certified = false`); the
/// caller decides whether to fall back to another method.
pub fn solve_lp_reduction(inst: &LcpInstance, p: &[f64]) -> Result<Reduction> {
    let n = inst.dim();
    if p.len() != n {
        return Err(Error::Dimension(format!("p has length {}, expected {n}", p.len())));
    }
    let b: Vec<f64> = inst.q.iter().map(|v| -v).collect();
    let sol = solve_lp(&LpProblem::new(p.to_vec(), inst.m.clone(), b)?)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::Infeasible),
        LpStatus::Unbounded => {
            return Err(Error::ClassCheck("p^T z is unbounded below on the feasible set".into()));
        }
    }
    let y = sol.y;
    let mty = inst.m.tr_mul_vec(&y);
    let cert: Vec<f64> = (0..n).map(|i| y[i] - mty[i] + p[i]).collect();
    let certificate_min = min_of(&cert);
    let mut solution = LcpSolution::from_z(inst, sol.x, Method::LpReduction);
    solution.dual = Some(y);
    Ok(Reduction { solution, certified: certificate_min > tol::CERTIFICATE, certificate_min })
}

fn block_size_of(inst: &LcpInstance) -> usize {
    inst.partition.map_or(inst.dim(), |p| p.block_size)
}

/// `p` for the block triangular reduction: `e` by default, or the
/// strictly positive strategy `r` with `r^T Z1 > 0` when `z1` is given.
pub fn derive_p_block_triangular(inst: &LcpInstance, z1: Option<&Matrix>) -> Result<Vec<f64>> {
    let check = is_block_triangular_k(&inst.m, block_size_of(inst), Strictness::Relaxed)?;
    if !check.holds {
        return Err(Error::ClassCheck(check.failure.unwrap_or_else(|| "not block triangular K".into())));
    }
    let Some(z1) = z1 else { return Ok(vec![1.0; inst.dim()]) };
    if z1.rows() != inst.dim() || !z1.is_square() {
        return Err(Error::Dimension("Z1 must match the dimension of M".into()));
    }
    let z1_check = is_block_triangular_k(z1, block_size_of(inst), Strictness::Relaxed)?;
    if !z1_check.holds {
        return Err(Error::ClassCheck("Z1 is not block triangular K".into()));
    }
    positive_value_vector(z1)?.ok_or_else(|| Error::ClassCheck("v(Z1^T) is not positive".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HiddenP {
    pub p: Vec<f64>,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    /// `p >= -1e-12`.
    pub nonnegative: bool,
}

/// `p = r + N^T s` with `r^T X > 0` and `s^T Y > 0` taken from game
/// strategies; requires verified witnesses.
///
/// Optimal strategies often sit on a face of the simplex. They are blended
/// towards the uniform vector while the strict inequality survives, so
/// `r` and `s` come out strictly positive whenever possible; a zero
/// coordinate in `r + s` would leave the dual certificate at `y = s`
/// with a zero entry.
pub fn derive_p_hidden(inst: &LcpInstance) -> Result<HiddenP> {
    let w = inst.witnesses.as_ref().ok_or_else(|| Error::Witness("hidden witnesses X, Y are missing".into()))?;
    let check = verify_hidden_block_triangular_k(&inst.m, &w.x, &w.y, block_size_of(inst), Strictness::Relaxed)?;
    if !check.holds {
        return Err(Error::Witness(check.failure.unwrap_or_else(|| "witnesses rejected".into())));
    }
    let r = interior(positive_value_vector(&w.x)?.ok_or(Error::NotStrict { value: 0.0 })?, &w.x);
    let s = interior(positive_value_vector(&w.y)?.ok_or(Error::NotStrict { value: 0.0 })?, &w.y);
    let p = add_vec(&r, &inst.m.tr_mul_vec(&s));
    let nonnegative = min_of(&p) >= -1e-12;
    Ok(HiddenP { p, r, s, nonnegative })
}

fn interior(v: Vec<f64>, a: &Matrix) -> Vec<f64> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let margin = min_of(&a.tr_mul_vec(&v));
    for delta in [0.5, 0.25, 0.1, 0.01, 1e-3] {
        let c: Vec<f64> = v.iter().map(|x| (1.0 - delta) * x + delta * mean).collect();
        if min_of(&a.tr_mul_vec(&c)) >= 0.5 * margin {
            return c;
        }
    }
    v
}
