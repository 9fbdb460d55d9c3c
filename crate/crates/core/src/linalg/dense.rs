use crate::error::{Error, Result};
use crate::tol;

use super::matrix::Matrix;

fn require_square(m: &Matrix, what: &str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("{what} needs a square matrix, got {}x{}", m.rows(), m.cols())))
    }
}

/// Determinant by partial-pivot elimination. Returns exactly `0.0` when a
/// pivot falls below the singularity threshold.
pub fn det(m: &Matrix) -> f64 {
    assert!(m.is_square(), "det: square matrix required");
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap();
        let pivot = a[p * n + k];
        if pivot.abs() < tol::SINGULAR_PIVOT {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        det *= pivot;
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    det
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    require_square(m, "inverse")?;
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut inv = Matrix::identity(n).as_slice().to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap();
        let pivot = a[p * n + k];
        if pivot.abs() < tol::SINGULAR_PIVOT {
            return Err(Error::Singular { pivot: pivot.abs() });
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
                inv.swap(k * n + j, p * n + j);
            }
        }
        for j in 0..n {
            a[k * n + j] /= pivot;
            inv[k * n + j] /= pivot;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i * n + k];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[i * n + j] -= f * a[k * n + j];
                inv[i * n + j] -= f * inv[k * n + j];
            }
        }
    }
    Matrix::new(n, n, inv)
}

/// Solves `m x = b` by partial-pivot elimination.
pub fn solve(m: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    require_square(m, "solve")?;
    let n = m.dim();
    if b.len() != n {
        return Err(Error::Dimension(format!("rhs length {} for dimension {n}", b.len())));
    }
    let mut a = m.as_slice().to_vec();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap();
        let pivot = a[p * n + k];
        if pivot.abs() < tol::SINGULAR_PIVOT {
            return Err(Error::Singular { pivot: pivot.abs() });
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                a[i * n + j] -= f * a[k * n + j];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k * n + j] * x[j]).sum();
        x[k] = (x[k] - s) / a[k * n + k];
    }
    Ok(x)
}

/// Rows and columns of `m` restricted to `alpha` (0-based), in the given order.
pub fn principal_submatrix(m: &Matrix, alpha: &[usize]) -> Result<Matrix> {
    require_square(m, "principal_submatrix")?;
    if alpha.is_empty() {
        return Err(Error::Dimension("empty index set".into()));
    }
    let n = m.dim();
    if let Some(&bad) = alpha.iter().find(|&&i| i >= n) {
        return Err(Error::OutOfRange { index: bad, dim: n });
    }
    let k = alpha.len();
    Ok(Matrix::from_fn(k, k, |i, j| m.get(alpha[i], alpha[j])))
}

/// Strict row diagonal dominance: `|m_ii| > sum_{k != i} |m_ik|` for all rows.
pub fn is_diagonally_dominant(m: &Matrix) -> bool {
    assert!(m.is_square());
    (0..m.dim()).all(|i| {
        let off: f64 = m.row(i).iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| v.abs()).sum();
        m.get(i, i).abs() > off
    })
}

/// Componentwise minimum.
pub fn meet(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("meet of lengths {} and {}", x.len(), y.len())));
    }
    Ok(x.iter().zip(y).map(|(a, b)| a.min(*b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&Matrix::identity(2)), 1.0);
        // ad - bc = 2 - 1.5
        assert!((det(&m(&[&[1.0, -1.0], &[-1.5, 2.0]])) - 0.5).abs() < 1e-15);
        assert_eq!(det(&m(&[&[1.0, 2.0], &[2.0, 4.0]])), 0.0);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&Matrix::identity(3)).unwrap(), Matrix::identity(3));
        // adj / det with det = 0.5
        let inv = inverse(&m(&[&[1.0, -1.0], &[-1.5, 2.0]])).unwrap();
        let want = m(&[&[4.0, 2.0], &[3.0, 2.0]]);
        assert!((&inv - &want).max_abs() < 1e-12);
        assert!(matches!(inverse(&m(&[&[1.0, 1.0], &[1.0, 1.0]])), Err(Error::Singular { .. })));
    }

    #[test]
    fn solve_matches_inverse() {
        let a = m(&[&[4.0, -1.0, 0.0], &[-1.0, 4.0, -1.0], &[0.0, -1.0, 4.0]]);
        let b = [1.0, 2.0, 3.0];
        let x = solve(&a, &b).unwrap();
        let r = a.mul_vec(&x);
        assert!(super::super::max_abs_diff(&r, &b) < 1e-12);
    }

    #[test]
    fn principal_submatrix_examples() {
        let i3 = Matrix::identity(3);
        assert_eq!(principal_submatrix(&i3, &[1]).unwrap().to_rows(), vec![vec![1.0]]);
        assert_eq!(principal_submatrix(&i3, &[0, 1, 2]).unwrap(), i3);
        assert!(matches!(principal_submatrix(&i3, &[3]), Err(Error::OutOfRange { index: 3, dim: 3 })));
        assert!(principal_submatrix(&i3, &[]).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(!is_diagonally_dominant(&m(&[&[5.0, -1.0], &[-10.0, 6.0]])));
        assert!(is_diagonally_dominant(&Matrix::identity(2)));
        assert!(is_diagonally_dominant(&m(&[&[2.0, -1.0], &[-1.5, 2.0]])));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&[1.0, 2.0], &[2.0, 1.0]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(meet(&[6.0, 5.0], &[7.0, 5.0]).unwrap(), vec![6.0, 5.0]);
        assert_eq!(meet(&[3.0, -1.0], &[3.0, -1.0]).unwrap(), vec![3.0, -1.0]);
        assert!(meet(&[1.0], &[1.0, 2.0]).is_err());
    }
}
