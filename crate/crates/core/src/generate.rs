//! Random instance generators. All take an explicit RNG so callers control
//! seeding; the CLI uses `ChaCha8Rng::seed_from_u64(seed + index)`.

use rand::Rng;

use crate::error::Result;
use crate::linalg::{assemble, inverse, Matrix, Orientation};

/// Off-diagonal entries in `[-1, 0]`, diagonal = absolute off-diagonal row
/// sum + a margin in `[0.1, 1]`. Strictly diagonally dominant Z-matrices
/// with positive diagonal are K-matrices.
pub fn k_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    let mut rows = vec![vec![0.0; dim]; dim];
    for (i, row) in rows.iter_mut().enumerate() {
        let mut sum = 0.0;
        for (j, v) in row.iter_mut().enumerate() {
            if i != j {
                *v = -rng.random_range(0.0..=1.0);
                sum -= *v;
            }
        }
        row[i] = sum + rng.random_range(0.1..=1.0);
    }
    Matrix::from_rows(&rows).expect("finite entries")
}

/// What fills the off-diagonal blocks on the nonzero side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffDiagonal {
    /// Entries in `[-1, 0]`: the whole matrix is a Z-matrix, and block
    /// triangular K in the relaxed sense.
    Nonpositive,
    /// Independent K-matrices: block triangular K in the strict sense.
    KBlocks,
}

pub fn block_triangular_k<R: Rng + ?Sized>(
    block_count: usize,
    block_size: usize,
    orientation: Orientation,
    off_diagonal: OffDiagonal,
    rng: &mut R,
) -> Matrix {
    assemble(block_size, block_count, |i, j| {
        if i == j {
            k_matrix(block_size, rng)
        } else if orientation.is_zero_block(i, j) {
            Matrix::zeros(block_size, block_size)
        } else {
            match off_diagonal {
                OffDiagonal::Nonpositive => Matrix::from_fn(block_size, block_size, |_, _| -rng.random_range(0.0..=1.0)),
                OffDiagonal::KBlocks => k_matrix(block_size, rng),
            }
        }
    })
}

/// `(N, X, Y)` with `X`, `Y` block triangular K (nonpositive off-diagonal
/// blocks, same zero pattern) and `N = Y X^{-1}`.
pub fn hidden_triple<R: Rng + ?Sized>(
    block_count: usize,
    block_size: usize,
    orientation: Orientation,
    rng: &mut R,
) -> Result<(Matrix, Matrix, Matrix)> {
    let x = block_triangular_k(block_count, block_size, orientation, OffDiagonal::Nonpositive, rng);
    let y = block_triangular_k(block_count, block_size, orientation, OffDiagonal::Nonpositive, rng);
    let n = &y * &inverse(&x)?;
    // Products of conformal block triangular matrices keep the pattern
    // exactly in exact arithmetic; clear rounding noise in the zero blocks.
    let bs = block_size;
    let n = Matrix::from_fn(n.rows(), n.cols(), |i, j| if orientation.is_zero_block(i / bs, j / bs) { 0.0 } else { n.get(i, j) });
    Ok((n, x, y))
}

/// Entries uniform in `[-5, 5]`.
pub fn uniform_q<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-5.0..=5.0)).collect()
}

/// `(M, N)` with `M <= N` entrywise, `M` block triangular K with
/// nonpositive off-diagonal blocks, and `N` obtained by raising the
/// diagonal and moving off-diagonal entries towards zero. `N` keeps the
/// zero pattern and the Z sign pattern.
pub fn monotone_k_pair<R: Rng + ?Sized>(
    block_count: usize,
    block_size: usize,
    orientation: Orientation,
    rng: &mut R,
) -> (Matrix, Matrix) {
    let m = block_triangular_k(block_count, block_size, orientation, OffDiagonal::Nonpositive, rng);
    let n = raise_z(&m, rng);
    (m, n)
}

/// A random `N >= M` for a Z-matrix `M`: diagonal `+ [0, 1]`,
/// off-diagonal `m_ij (1 - t)`, `t` in `[0, 1]`.
pub fn raise_z<R: Rng + ?Sized>(m: &Matrix, rng: &mut R) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        let v = m.get(i, j);
        if i == j {
            v + rng.random_range(0.0..=1.0)
        } else {
            v * (1.0 - rng.random_range(0.0..=1.0))
        }
    })
}

/// Nonnegative `(M, N)` with `0 <= M <= N`; about 30% of `N` is zero so
/// reducible cases show up.
pub fn nonnegative_pair<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> (Matrix, Matrix) {
    let n = Matrix::from_fn(dim, dim, |_, _| if rng.random_bool(0.3) { 0.0 } else { rng.random_range(0.0..=1.0) });
    let m = Matrix::from_fn(dim, dim, |i, j| n.get(i, j) * rng.random_range(0.0..=1.0));
    (m, n)
}

/// Matrix with a strictly dominant principal diagonal of random signs.
pub fn dominant_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    let mut rows = vec![vec![0.0; dim]; dim];
    for (i, row) in rows.iter_mut().enumerate() {
        let mut sum = 0.0;
        for (j, v) in row.iter_mut().enumerate() {
            if i != j {
                let x: f64 = rng.random_range(-1.0..=1.0);
                *v = x;
                sum += x.abs();
            }
        }
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        row[i] = sign * (sum + rng.random_range(0.1..=1.0));
    }
    Matrix::from_rows(&rows).expect("finite entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_block_triangular_k, is_k, verify_hidden_block_triangular_k, Strictness};
    use crate::linalg::is_diagonally_dominant;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_land_in_their_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            assert!(is_k(&k_matrix(4, &mut rng)).unwrap());
            let m = block_triangular_k(3, 2, Orientation::Lower, OffDiagonal::KBlocks, &mut rng);
            assert!(is_block_triangular_k(&m, 2, Strictness::Strict).unwrap().holds);
            let m = block_triangular_k(3, 2, Orientation::Upper, OffDiagonal::Nonpositive, &mut rng);
            let r = is_block_triangular_k(&m, 2, Strictness::Relaxed).unwrap();
            assert_eq!(r.orientation(), Some(Orientation::Upper));
            let (n, x, y) = hidden_triple(2, 2, Orientation::Lower, &mut rng).unwrap();
            assert!(verify_hidden_block_triangular_k(&n, &x, &y, 2, Strictness::Relaxed).unwrap().holds);
            let (m, n) = monotone_k_pair(2, 2, Orientation::Lower, &mut rng);
            assert!(m.le(&n));
            let (m, n) = nonnegative_pair(4, &mut rng);
            assert!(m.min_entry() >= 0.0 && m.le(&n));
            assert!(is_diagonally_dominant(&dominant_matrix(4, &mut rng)));
        }
    }
}
