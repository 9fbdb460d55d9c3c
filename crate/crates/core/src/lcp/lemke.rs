use std::cmp::Ordering;

use serde::Serialize;

use super::{LcpInstance, LcpSolution, Method};
use crate::error::{Error, Result};
use crate::tol;

const MAX_PIVOTS: usize = 100_000;

/// Secondary ray reached by Lemke's method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayTermination {
    pub pivots: usize,
    /// Value of the artificial variable when the ray was found.
    pub z0: f64,
    /// Current basic point `(z, w)` at the ray's origin.
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    /// Direction of the ray in `(z, w, z0)`.
    pub ray_z: Vec<f64>,
    pub ray_w: Vec<f64>,
    pub ray_z0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LemkeOutcome {
    Solved(LcpSolution),
    Ray(RayTermination),
}

impl LemkeOutcome {
    pub fn solution(self) -> Option<LcpSolution> {
        match self {
            LemkeOutcome::Solved(s) => Some(s),
            LemkeOutcome::Ray(_) => None,
        }
    }
}

/// Lemke's complementary pivoting with covering vector `e`.
pub fn solve_lemke(inst: &LcpInstance) -> Result<LemkeOutcome> {
    solve_lemke_with_covering(inst, &vec![1.0; inst.dim()])
}

/// Lemke's method on `w - Mz - d z0 = q` with a lexicographic ratio test.
///
/// Columns `0..n` hold `w`, `n..2n` hold `z`, `2n` holds `z0`. Since the
/// starting basis is `w`, the first `n` tableau columns always carry the
/// current basis inverse, which is what the lexicographic rule compares.
pub fn solve_lemke_with_covering(inst: &LcpInstance, d: &[f64]) -> Result<LemkeOutcome> {
    let n = inst.dim();
    if d.len() != n || d.iter().any(|v| v.is_nan() || *v <= 0.0) {
        return Err(Error::Dimension("covering vector must be positive with length n".into()));
    }
    if inst.q.iter().all(|&v| v >= 0.0) {
        let sol = LcpSolution::new(inst, vec![0.0; n], inst.q.clone(), Method::Lemke);
        return Ok(LemkeOutcome::Solved(sol));
    }

    let mut tab = Tableau::new(inst, d);
    let z0_col = 2 * n;

    // First pivot: z0 enters at the row attaining the lexicographic
    // minimum of (q_i, e_i^T) / d_i, which makes every row lex-positive.
    let rows: Vec<usize> = (0..n).collect();
    let r = tab.lex_argmin(&rows, z0_col, -1.0);
    tab.pivot(r, z0_col)?;
    let mut leaving = r; // w_r left the basis

    loop {
        if tab.pivots >= MAX_PIVOTS {
            return Err(Error::IterationLimit(MAX_PIVOTS));
        }
        let entering = if leaving < n { leaving + n } else { leaving - n };
        let candidates: Vec<usize> = (0..n).filter(|&i| tab.at(i, entering) > tol::PIVOT).collect();
        if candidates.is_empty() {
            return Ok(LemkeOutcome::Ray(tab.ray(entering)));
        }
        let row = match tab.z0_row() {
            Some(zr) if candidates.contains(&zr) && tab.ties_minimum(&candidates, zr, entering) => zr,
            _ => tab.lex_argmin(&candidates, entering, 1.0),
        };
        let out = tab.basis[row];
        tab.pivot(row, entering)?;
        if out == z0_col {
            break;
        }
        leaving = out;
    }

    let (z, w) = tab.point();
    let sol = LcpSolution::new(inst, z, w, Method::Lemke);
    if !sol.meets_contract_with(tol::ASSERTION) {
        return Err(Error::NumericalBreakdown(format!("Lemke terminal point fails residual checks: {:?}", sol.residuals)));
    }
    Ok(LemkeOutcome::Solved(sol))
}

struct Tableau {
    n: usize,
    cols: usize,
    t: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn new(inst: &LcpInstance, d: &[f64]) -> Self {
        let n = inst.dim();
        let cols = 2 * n + 1;
        let mut t = vec![0.0; n * cols];
        for i in 0..n {
            t[i * cols + i] = 1.0;
            for j in 0..n {
                t[i * cols + n + j] = -inst.m.get(i, j);
            }
            t[i * cols + 2 * n] = -d[i];
        }
        Self { n, cols, t, rhs: inst.q.clone(), basis: (0..n).collect(), pivots: 0 }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    fn z0_row(&self) -> Option<usize> {
        self.basis.iter().position(|&b| b == 2 * self.n)
    }

    fn ratio_key(&self, i: usize, col: usize, sign: f64, k: usize) -> f64 {
        let denom = sign * self.at(i, col);
        let num = if k == 0 { self.rhs[i] } else { self.at(i, k - 1) };
        num / denom
    }

    /// Row among `rows` minimizing `(rhs_i, B^{-1}_i) / (sign * t_i,col)`
    /// lexicographically.
    fn lex_argmin(&self, rows: &[usize], col: usize, sign: f64) -> usize {
        let mut best = rows[0];
        for &i in &rows[1..] {
            if self.lex_cmp(i, best, col, sign) == Ordering::Less {
                best = i;
            }
        }
        best
    }

    fn lex_cmp(&self, a: usize, b: usize, col: usize, sign: f64) -> Ordering {
        for k in 0..=self.n {
            let (x, y) = (self.ratio_key(a, col, sign, k), self.ratio_key(b, col, sign, k));
            let slack = 1e-11 * (1.0 + x.abs().max(y.abs()));
            if x < y - slack {
                return Ordering::Less;
            }
            if x > y + slack {
                return Ordering::Greater;
            }
        }
        a.cmp(&b)
    }

    fn ties_minimum(&self, rows: &[usize], row: usize, col: usize) -> bool {
        let min = rows.iter().map(|&i| self.ratio_key(i, col, 1.0, 0)).fold(f64::INFINITY, f64::min);
        let mine = self.ratio_key(row, col, 1.0, 0);
        mine <= min + 1e-11 * (1.0 + min.abs())
    }

    fn pivot(&mut self, r: usize, e: usize) -> Result<()> {
        let cols = self.cols;
        let p = self.at(r, e);
        if p.abs() < tol::BREAKDOWN {
            return Err(Error::NumericalBreakdown(format!("Lemke pivot {p:e} below {:e}", tol::BREAKDOWN)));
        }
        for j in 0..cols {
            self.t[r * cols + j] /= p;
        }
        self.rhs[r] /= p;
        let prow: Vec<f64> = self.t[r * cols..(r + 1) * cols].to_vec();
        let prhs = self.rhs[r];
        for i in 0..self.n {
            if i == r {
                continue;
            }
            let f = self.at(i, e);
            if f == 0.0 {
                continue;
            }
            for (j, pv) in prow.iter().enumerate() {
                self.t[i * cols + j] -= f * pv;
            }
            self.t[i * cols + e] = 0.0;
            self.rhs[i] -= f * prhs;
        }
        self.basis[r] = e;
        self.pivots += 1;
        Ok(())
    }

    fn point(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut z = vec![0.0; n];
        let mut w = vec![0.0; n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                w[b] = self.rhs[i];
            } else if b < 2 * n {
                z[b - n] = self.rhs[i];
            }
        }
        (z, w)
    }

    fn ray(&self, entering: usize) -> RayTermination {
        let n = self.n;
        let (z, w) = self.point();
        let mut dir = vec![0.0; 2 * n + 1];
        dir[entering] = 1.0;
        for (i, &b) in self.basis.iter().enumerate() {
            dir[b] = -self.at(i, entering);
        }
        let z0 = self.z0_row().map(|r| self.rhs[r]).unwrap_or(0.0);
        RayTermination {
            pivots: self.pivots,
            z0,
            z,
            w,
            ray_w: dir[..n].to_vec(),
            ray_z: dir[n..2 * n].to_vec(),
            ray_z0: dir[2 * n],
        }
    }
}
