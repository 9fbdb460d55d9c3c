//! Dense two-phase primal simplex for
//!
//! ```text
//! minimize    c^T x
//! subject to  A x >= b,  x >= 0
//! ```
//!
//! Bland's rule is always on: the entering column is the lowest-index
//! column with negative reduced cost, the leaving row is the minimum
//! ratio row whose basic variable has the lowest index. The solver also
//! returns the dual multipliers `y >= 0` of `A x >= b`, read off the
//! reduced costs of the surplus columns.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::tol;

const OPTIMALITY: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub c: Vec<f64>,
    pub a: Matrix,
    pub b: Vec<f64>,
}

impl LpProblem {
    pub fn new(c: Vec<f64>, a: Matrix, b: Vec<f64>) -> Result<Self> {
        if a.rows() != b.len() || a.cols() != c.len() {
            return Err(Error::Dimension(format!(
                "LP with A {}x{}, b {}, c {}",
                a.rows(),
                a.cols(),
                b.len(),
                c.len()
            )));
        }
        if c.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::Dimension("non-finite LP data".into()));
        }
        Ok(Self { c, a, b })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal point; meaningful only when `status` is `Optimal`.
    pub x: Vec<f64>,
    /// Dual multipliers for `A x >= b`.
    pub y: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

struct Tableau {
    rows: usize,
    cols: usize,
    t: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    reduced: Vec<f64>,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let cols = self.cols;
        let p = self.at(r, e);
        for j in 0..cols {
            self.t[r * cols + j] /= p;
        }
        self.rhs[r] /= p;
        let pivot_row: Vec<f64> = self.t[r * cols..(r + 1) * cols].to_vec();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.at(i, e);
            if f == 0.0 {
                continue;
            }
            for (j, pv) in pivot_row.iter().enumerate() {
                self.t[i * cols + j] -= f * pv;
            }
            self.t[i * cols + e] = 0.0;
            self.rhs[i] -= f * pivot_rhs;
        }
        let f = self.reduced[e];
        if f != 0.0 {
            for (j, pv) in pivot_row.iter().enumerate() {
                self.reduced[j] -= f * pv;
            }
            self.reduced[e] = 0.0;
        }
        self.basis[r] = e;
        self.pivots += 1;
    }

    fn set_costs(&mut self, cost: &[f64]) {
        self.reduced = cost.to_vec();
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                self.reduced[j] -= cb * self.at(i, j);
            }
        }
    }

    /// Runs Bland-rule pivots over the columns `< allowed`.
    fn optimize(&mut self, allowed: usize, cap: usize) -> Result<Step> {
        loop {
            if self.pivots >= cap {
                return Err(Error::IterationLimit(cap));
            }
            let entering = (0..allowed).find(|&j| self.reduced[j] < -OPTIMALITY && !self.basis.contains(&j));
            let Some(e) = entering else {
                return Ok(Step::Optimal);
            };
            let mut best: Option<(usize, f64)> = None;
            let mut tiny = false;
            for i in 0..self.rows {
                let a = self.at(i, e);
                if a <= tol::PIVOT {
                    if a > tol::BREAKDOWN {
                        tiny = true;
                    }
                    continue;
                }
                let ratio = self.rhs[i].max(0.0) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let slack = 1e-12 * (1.0 + br.abs());
                        if ratio < br - slack || (ratio <= br + slack && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                Some((r, _)) => self.pivot(r, e),
                None if tiny => {
                    return Err(Error::NumericalBreakdown(format!(
                        "column {e} has only pivots between {:e} and {:e}",
                        tol::BREAKDOWN,
                        tol::PIVOT
                    )))
                }
                None => return Ok(Step::Unbounded),
            }
        }
    }
}

/// Solves the LP. Infeasible and unbounded problems are reported through
/// `status`; an `Err` means the arithmetic could not be trusted.
pub fn solve_lp(prob: &LpProblem) -> Result<LpSolution> {
    let (m, n) = (prob.a.rows(), prob.a.cols());
    let art: Vec<usize> = (0..m).filter(|&i| prob.b[i] > 0.0).collect();
    let cols = n + m + art.len();
    let mut t = vec![0.0; m * cols];
    let mut rhs = vec![0.0; m];
    let mut basis = vec![0; m];
    for i in 0..m {
        // Row i: a_i x - s_i = b_i, negated when b_i <= 0 so the surplus starts basic.
        let sign = if prob.b[i] > 0.0 { 1.0 } else { -1.0 };
        for j in 0..n {
            t[i * cols + j] = sign * prob.a.get(i, j);
        }
        t[i * cols + n + i] = -sign;
        rhs[i] = sign * prob.b[i];
        basis[i] = n + i;
    }
    for (k, &i) in art.iter().enumerate() {
        t[i * cols + n + m + k] = 1.0;
        basis[i] = n + m + k;
    }
    let mut tab = Tableau { rows: m, cols, t, rhs, basis, reduced: vec![0.0; cols], pivots: 0 };
    let cap = 1000 + 50 * (m + cols);
    let scale = 1.0 + prob.b.iter().fold(0.0_f64, |a, v| a.max(v.abs()));

    if !art.is_empty() {
        let mut phase1 = vec![0.0; cols];
        for c in &mut phase1[n + m..] {
            *c = 1.0;
        }
        tab.set_costs(&phase1);
        tab.optimize(cols, cap)?;
        let infeas: f64 = (0..m).filter(|&i| tab.basis[i] >= n + m).map(|i| tab.rhs[i]).sum();
        if infeas > 1e-9 * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: vec![0.0; n],
                y: vec![0.0; m],
                objective: f64::NAN,
                pivots: tab.pivots,
            });
        }
        for i in 0..m {
            if tab.basis[i] < n + m {
                continue;
            }
            tab.rhs[i] = 0.0;
            let j = (0..n + m)
                .filter(|&j| tab.at(i, j).abs() > tol::PIVOT)
                .max_by(|&a, &b| tab.at(i, a).abs().total_cmp(&tab.at(i, b).abs()));
            if let Some(j) = j {
                tab.pivot(i, j);
            }
        }
    }

    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(&prob.c);
    tab.set_costs(&cost);
    let step = tab.optimize(n + m, cap)?;
    let mut x = vec![0.0; n];
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.rhs[i].max(0.0);
        }
    }
    let y: Vec<f64> = (0..m).map(|i| tab.reduced[n + i]).collect();
    if let Step::Unbounded = step {
        return Ok(LpSolution { status: LpStatus::Unbounded, x, y, objective: f64::NEG_INFINITY, pivots: tab.pivots });
    }
    let objective = dot(&prob.c, &x);
    let sol = LpSolution { status: LpStatus::Optimal, x, y, objective, pivots: tab.pivots };
    check_optimal(prob, &sol, scale)?;
    Ok(sol)
}

fn check_optimal(prob: &LpProblem, sol: &LpSolution, scale: f64) -> Result<()> {
    let ax = prob.a.mul_vec(&sol.x);
    let primal = ax.iter().zip(&prob.b).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min);
    let big = scale + sol.x.iter().fold(0.0_f64, |a, v| a.max(v.abs())) * prob.a.max_abs();
    if primal < -1e-8 * big {
        return Err(Error::NumericalBreakdown(format!("primal violation {primal:e} at reported optimum")));
    }
    let by = dot(&prob.b, &sol.y);
    let gap = (sol.objective - by).abs();
    if gap > 1e-7 * (1.0 + sol.objective.abs()) * big {
        return Err(Error::NumericalBreakdown(format!("duality gap {gap:e} at reported optimum")));
    }
    Ok(())
}

/// Finds a point of `{z >= 0 : q + M z >= 0}`, if any.
pub fn feasible(m: &Matrix, q: &[f64]) -> Result<Option<Vec<f64>>> {
    if !m.is_square() || m.rows() != q.len() {
        return Err(Error::Dimension("feasible: M must be square and match q".into()));
    }
    let prob = LpProblem::new(vec![0.0; q.len()], m.clone(), q.iter().map(|v| -v).collect())?;
    let sol = solve_lp(&prob)?;
    Ok(match sol.status {
        LpStatus::Optimal => Some(sol.x),
        _ => None,
    })
}
