//! Two-player zero-sum matrix games.
//!
//! Convention: the row player picks `x` on the simplex and pays at most
//! `v` against every column (`x^T A <= v`); the column player picks `y`
//! and receives at least `v` against every row (`A y >= v`). Under this
//! convention `v(A) > 0` exactly when some `y >= 0` has `A y > 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{min_of, Matrix};
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameSolution {
    pub value: f64,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
}

impl GameSolution {
    /// Largest violation of the strategy inequalities and simplex constraints.
    pub fn contract_violation(&self, a: &Matrix) -> f64 {
        let mut worst = 0.0_f64;
        let row_pay = a.tr_mul_vec(&self.row_strategy);
        let col_pay = a.mul_vec(&self.col_strategy);
        for p in row_pay {
            worst = worst.max(p - self.value);
        }
        for p in col_pay {
            worst = worst.max(self.value - p);
        }
        for s in [&self.row_strategy, &self.col_strategy] {
            worst = worst.max(-min_of(s));
            worst = worst.max((s.iter().sum::<f64>() - 1.0).abs());
        }
        worst
    }
}

/// Value and optimal strategies of the game with payoff `a`.
///
/// The payoff is shifted by `1 + max|a_ij|` so it is strictly positive;
/// then `min e^T u s.t. B u >= e, u >= 0` has optimum `1 / v(B)`, the
/// primal gives the column strategy and the dual the row strategy.
pub fn game_value(a: &Matrix) -> Result<GameSolution> {
    let shift = 1.0 + a.max_abs();
    let b = a.map(|v| v + shift);
    let (rows, cols) = (a.rows(), a.cols());
    let prob = LpProblem::new(vec![1.0; cols], b, vec![1.0; rows])?;
    let sol = solve_lp(&prob)?;
    if sol.status != LpStatus::Optimal || sol.objective <= 0.0 {
        return Err(Error::NumericalBreakdown(format!("game LP ended with status {:?}", sol.status)));
    }
    let shifted_value = 1.0 / sol.objective;
    let normalize = |v: &[f64]| -> Vec<f64> {
        let clipped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
        let s: f64 = clipped.iter().sum();
        clipped.iter().map(|x| x / s).collect()
    };
    Ok(GameSolution {
        value: shifted_value - shift,
        row_strategy: normalize(&sol.y),
        col_strategy: normalize(&sol.x),
    })
}

/// A vector `r >= 0` with `r^T a > 0` strictly, built from an optimal
/// strategy of the game on `a^T`. Returns `None` when `v(a^T)` is not
/// positive.
pub fn positive_value_vector(a: &Matrix) -> Result<Option<Vec<f64>>> {
    if !a.is_square() {
        return Err(Error::Dimension("positive_value_vector needs a square matrix".into()));
    }
    let g = game_value(&a.transpose())?;
    if g.value <= tol::STRICT {
        return Ok(None);
    }
    // a^T y >= v  <=>  y^T a >= v
    let mut r = g.col_strategy;
    let mut margin = min_of(&a.tr_mul_vec(&r));
    if margin <= 0.0 {
        // Nudge towards the uniform strategy and re-check.
        let n = r.len() as f64;
        for delta in [1e-6, 1e-4, 1e-2] {
            let cand: Vec<f64> = r.iter().map(|v| (1.0 - delta) * v + delta / n).collect();
            let m = min_of(&a.tr_mul_vec(&cand));
            if m > 0.0 {
                r = cand;
                margin = m;
                break;
            }
        }
        if margin <= 0.0 {
            return Err(Error::NotStrict { value: g.value });
        }
    }
    if margin < tol::STRICT {
        let s = tol::STRICT / margin;
        r.iter_mut().for_each(|v| *v *= s);
    }
    Ok(Some(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn one_by_one() {
        let g = game_value(&mat(&[&[1.0]])).unwrap();
        assert!((g.value - 1.0).abs() < 1e-12);
        assert_eq!(g.row_strategy, vec![1.0]);
        assert_eq!(g.col_strategy, vec![1.0]);
    }

    #[test]
    fn symmetric_games() {
        let g = game_value(&Matrix::identity(2)).unwrap();
        assert!((g.value - 0.5).abs() < 1e-10);
        assert!((g.row_strategy[0] - 0.5).abs() < 1e-10);
        assert!((g.col_strategy[1] - 0.5).abs() < 1e-10);
        let a = mat(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let g = game_value(&a).unwrap();
        assert!((g.value - 0.5).abs() < 1e-10);
        assert!(g.contract_violation(&a) < 1e-9);
    }

    #[test]
    fn rock_paper_scissors_is_fair() {
        let a = mat(&[&[0.0, -1.0, 1.0], &[1.0, 0.0, -1.0], &[-1.0, 1.0, 0.0]]);
        let g = game_value(&a).unwrap();
        assert!(g.value.abs() < 1e-10);
        assert!(g.contract_violation(&a) < 1e-9);
    }

    #[test]
    fn positive_vectors() {
        let r = positive_value_vector(&Matrix::identity(3)).unwrap().unwrap();
        assert!(r.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-10));
        assert!(positive_value_vector(&mat(&[&[-1.0]])).unwrap().is_none());
        let x = mat(&[&[2.0, -1.0, 0.0, 0.0], &[-3.0, 2.0, 0.0, 0.0], &[3.0, 0.0, 4.0, -1.0], &[-2.0, 1.0, 0.0, 4.0]]);
        let r = positive_value_vector(&x).unwrap().unwrap();
        assert!(r.iter().all(|v| *v >= 0.0));
        assert!(min_of(&x.tr_mul_vec(&r)) > 0.0);
    }
}
