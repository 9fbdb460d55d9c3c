use super::{solve_lemke, LcpInstance, LcpSolution, LemkeOutcome, Method};
use crate::classify::is_k;
use crate::error::{Error, Result};
use crate::linalg::{extract_block, has_zero_pattern, reverse_block_vec, reverse_blocks, BlockPartition, Orientation};

/// Block forward substitution: solve `LCP(M_11, q_1)`, then
/// `LCP(M_ii, q_i + sum_{j<i} M_ij z_j)` for each later block.
///
/// Upper-oriented inputs are reversed block-wise into lower orientation,
/// solved, and mapped back.
pub fn solve_block_sequential(inst: &LcpInstance) -> Result<LcpSolution> {
    let part = inst
        .partition
        .ok_or_else(|| Error::ClassCheck("sequential block solve needs a block partition".into()))?;
    let (m, q) = match part.orientation {
        Orientation::Lower => (inst.m.clone(), inst.q.clone()),
        Orientation::Upper => (reverse_blocks(&inst.m, part.block_size), reverse_block_vec(&inst.q, part.block_size)),
    };
    let lower = BlockPartition { orientation: Orientation::Lower, ..part };
    if !has_zero_pattern(&m, &lower, Orientation::Lower)? {
        return Err(Error::ClassCheck(format!("matrix is not block triangular with {:?} orientation", part.orientation)));
    }

    let n = inst.dim();
    let mut z = vec![0.0; n];
    for i in 0..lower.block_count {
        let mii = extract_block(&m, &lower, i, i)?;
        if !is_k(&mii)? {
            return Err(Error::ClassCheck(format!("diagonal block {} is not a K-matrix", i + 1)));
        }
        let range = lower.range(i);
        let mut qi = q[range.clone()].to_vec();
        for j in 0..i {
            let zj = &z[lower.range(j)];
            let contrib = extract_block(&m, &lower, i, j)?.mul_vec(zj);
            for (a, b) in qi.iter_mut().zip(contrib) {
                *a += b;
            }
        }
        let sub = LcpInstance::new(mii, qi)?;
        match solve_lemke(&sub)? {
            LemkeOutcome::Solved(s) => z[range].copy_from_slice(&s.z),
            LemkeOutcome::Ray(_) => {
                return Err(Error::NumericalBreakdown(format!("ray termination on K block {}", i + 1)));
            }
        }
    }
    if part.orientation == Orientation::Upper {
        z = reverse_block_vec(&z, part.block_size);
    }
    Ok(LcpSolution::from_z(inst, z, Method::BlockSequential))
}
