use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lp::{solve_lp, LpProblem, LpStatus};

const VERTICES: usize = 5;

/// Points of `FEA(M, q) = {z >= 0 : Mz + q >= 0}`.
///
/// The first few points are LP vertices for random positive objectives
/// (the corners where least-element and lattice violations would show);
/// the rest come from a hit-and-run walk inside `FEA ∩ [0, B]^n`, started
/// at the vertex average. Errors with `Infeasible` on an empty set.
pub fn sample_feasible(m: &Matrix, q: &[f64], count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let n = q.len();
    if !m.is_square() || m.rows() != n {
        return Err(Error::Dimension("sample_feasible: M must be square and match q".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b: Vec<f64> = q.iter().map(|v| -v).collect();
    let mut vertices = Vec::new();
    for k in 0..VERTICES.min(count.max(1)) {
        let c: Vec<f64> = if k == 0 { vec![1.0; n] } else { (0..n).map(|_| rng.random_range(0.1..1.0)).collect() };
        let sol = solve_lp(&LpProblem::new(c, m.clone(), b.clone())?)?;
        match sol.status {
            LpStatus::Optimal => vertices.push(sol.x),
            LpStatus::Infeasible => return Err(Error::Infeasible),
            LpStatus::Unbounded => return Err(Error::NumericalBreakdown("positive objective unbounded on FEA".into())),
        }
    }
    let mut out: Vec<Vec<f64>> = vertices.iter().take(count).cloned().collect();
    if out.len() >= count {
        return Ok(out);
    }

    let top = vertices.iter().flatten().fold(0.0_f64, |a, v| a.max(*v));
    let bound = 2.0 * top + 1.0;
    let mut z = vec![0.0; n];
    for v in &vertices {
        for (zi, vi) in z.iter_mut().zip(v) {
            *zi += vi / vertices.len() as f64;
        }
    }
    while out.len() < count {
        for _ in 0..3 {
            step(m, q, bound, &mut z, &mut rng);
        }
        out.push(z.clone());
    }
    Ok(out)
}

fn step(m: &Matrix, q: &[f64], bound: f64, z: &mut [f64], rng: &mut ChaCha8Rng) {
    let n = z.len();
    let mut d: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    d.iter_mut().for_each(|v| *v /= norm);

    // Interval of t keeping every constraint a + t b >= 0.
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut clip = |a: f64, b: f64| {
        let a = a.max(0.0);
        if b > 1e-14 {
            lo = lo.max(-a / b);
        } else if b < -1e-14 {
            hi = hi.min(-a / b);
        }
    };
    let w = m.mul_vec(z);
    let md = m.mul_vec(&d);
    for i in 0..n {
        clip(z[i], d[i]);
        clip(bound - z[i], -d[i]);
        clip(w[i] + q[i], md[i]);
    }
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return;
    }
    let t = rng.random_range(lo..=hi);
    for (zi, di) in z.iter_mut().zip(&d) {
        *zi += t * di;
    }
}
