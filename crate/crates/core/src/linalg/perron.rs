use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};

use super::matrix::Matrix;

const MAX_ITER: usize = 10_000;
const SHIFT_EPS: f64 = 1e-8;
const GAP: f64 = 1e-10;

/// Perron root (spectral radius) of a nonnegative square matrix.
///
/// The matrix is split into strongly connected components of its
/// nonzero pattern; the root is the largest root among the irreducible
/// diagonal blocks. Each irreducible block is handled by power iteration
/// on `B + cI` with `c > 0`, which makes it primitive, and the iteration
/// stops once the Collatz-Wielandt bounds `min (Bx)_i / x_i` and
/// `max (Bx)_i / x_i` agree to within `1e-10` (relative to `max(1, root)`).
pub fn perron_root(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension("perron_root needs a square matrix".into()));
    }
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if v < 0.0 {
                return Err(Error::NegativeEntry { row: i, col: j, value: v });
            }
        }
    }

    let mut graph = DiGraph::<(), ()>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j) > 0.0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }

    let mut root: f64 = 0.0;
    for comp in tarjan_scc(&graph) {
        let idx: Vec<usize> = comp.iter().map(|nd| nd.index()).collect();
        let r = if idx.len() == 1 {
            m.get(idx[0], idx[0])
        } else {
            let k = idx.len();
            irreducible_root(&Matrix::from_fn(k, k, |a, b| m.get(idx[a], idx[b])))
        };
        root = root.max(r);
    }
    Ok(root)
}

fn irreducible_root(b: &Matrix) -> f64 {
    let k = b.dim();
    let shift = SHIFT_EPS + 0.5 * b.norm_inf();
    let mut x = vec![1.0; k];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..MAX_ITER {
        let mut y = b.mul_vec(&x);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += shift * xi;
        }
        lo = f64::INFINITY;
        hi = 0.0_f64;
        for (yi, xi) in y.iter().zip(&x) {
            let r = yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo <= GAP * (hi - shift).max(1.0) {
            break;
        }
        let top = y.iter().copied().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / top).collect();
    }
    (0.5 * (lo + hi) - shift).max(0.0)
}
