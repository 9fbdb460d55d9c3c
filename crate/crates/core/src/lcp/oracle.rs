use super::{LcpInstance, LcpSolution, Method};
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, principal_submatrix, solve, Matrix};
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::tol;

/// Largest dimension the enumeration accepts (`2^12` bases).
pub const ORACLE_LIMIT: usize = 12;

/// Every solution of the LCP, found by enumerating complementary bases.
///
/// For each support `alpha`, `z_alpha` solves `M_aa z_alpha = -q_alpha`;
/// when `M_aa` is singular the face is searched with an LP instead, which
/// finds one point of it. Solutions closer than `1e-7` are merged.
pub fn solve_bruteforce(inst: &LcpInstance) -> Result<Vec<LcpSolution>> {
    let n = inst.dim();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge { dim: n, limit: ORACLE_LIMIT });
    }
    let scale = 1.0 + inst.q.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut found: Vec<LcpSolution> = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let alpha: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let Some(z) = face_point(inst, &alpha)? else { continue };
        let sol = LcpSolution::from_z(inst, z, Method::Oracle);
        if sol.residuals.min_entry < -1e-9 * scale {
            continue;
        }
        if found.iter().any(|s| max_abs_diff(&s.z, &sol.z) <= tol::DEDUP) {
            continue;
        }
        found.push(sol);
    }
    Ok(found)
}

fn face_point(inst: &LcpInstance, alpha: &[usize]) -> Result<Option<Vec<f64>>> {
    let n = inst.dim();
    let mut z = vec![0.0; n];
    if alpha.is_empty() {
        return Ok(Some(z));
    }
    let sub = principal_submatrix(&inst.m, alpha)?;
    let rhs: Vec<f64> = alpha.iter().map(|&i| -inst.q[i]).collect();
    match solve(&sub, &rhs) {
        Ok(za) => {
            for (k, &i) in alpha.iter().enumerate() {
                z[i] = za[k];
            }
            Ok(Some(z))
        }
        Err(Error::Singular { .. }) => singular_face(inst, alpha),
        Err(e) => Err(e),
    }
}

/// `z_alpha >= 0` with `(Mz + q)_alpha = 0` and `(Mz + q)_rest >= 0`.
fn singular_face(inst: &LcpInstance, alpha: &[usize]) -> Result<Option<Vec<f64>>> {
    let n = inst.dim();
    let k = alpha.len();
    let rest: Vec<usize> = (0..n).filter(|i| !alpha.contains(i)).collect();
    let rows = 2 * k + rest.len();
    let a = Matrix::from_fn(rows, k, |r, c| {
        let j = alpha[c];
        if r < k {
            inst.m.get(alpha[r], j)
        } else if r < 2 * k {
            -inst.m.get(alpha[r - k], j)
        } else {
            inst.m.get(rest[r - 2 * k], j)
        }
    });
    let b: Vec<f64> = (0..rows)
        .map(|r| {
            if r < k {
                -inst.q[alpha[r]]
            } else if r < 2 * k {
                inst.q[alpha[r - k]]
            } else {
                -inst.q[rest[r - 2 * k]]
            }
        })
        .collect();
    let sol = solve_lp(&LpProblem::new(vec![1.0; k], a, b)?)?;
    if sol.status != LpStatus::Optimal {
        return Ok(None);
    }
    let mut z = vec![0.0; n];
    for (c, &i) in alpha.iter().enumerate() {
        z[i] = sol.x[c];
    }
    Ok(Some(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_solutions_for_a_nondegenerate_q0_matrix() {
        // M = -I with q = (1, 1): z in {0, e_1, e_2, e} restricted by w >= 0.
        let inst = LcpInstance::new(Matrix::from_rows(&[[-1.0, 0.0], [0.0, -1.0]]).unwrap(), vec![1.0, 1.0]).unwrap();
        let sols = solve_bruteforce(&inst).unwrap();
        assert_eq!(sols.len(), 4);
        assert!(sols.iter().all(|s| s.meets_contract_with(1e-9)));
    }

    #[test]
    fn singular_principal_block_is_searched_by_lp() {
        let inst = LcpInstance::new(Matrix::from_rows(&[[1.0, 0.0], [1.0, 0.0]]).unwrap(), vec![-1.0, -2.0]).unwrap();
        assert!(solve_bruteforce(&inst).unwrap().is_empty());
        let inst = inst.with_q(vec![-1.0, 0.0]).unwrap();
        let sols = solve_bruteforce(&inst).unwrap();
        assert!(!sols.is_empty());
        assert!(sols.iter().all(|s| s.meets_contract_with(1e-9)));
    }

    #[test]
    fn dimension_limit() {
        let inst = LcpInstance::new(Matrix::identity(13), vec![1.0; 13]).unwrap();
        assert!(matches!(solve_bruteforce(&inst), Err(Error::TooLarge { .. })));
    }
}
