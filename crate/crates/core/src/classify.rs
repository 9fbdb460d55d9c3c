//! Matrix-class predicates with certificates.
//!
//! Index sets in certificates are 0-based. Principal minors are enumerated
//! in bitmask order (`alpha = {i : bit i of k is set}` for `k = 1, 2, ...`),
//! so the first failing set is deterministic.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::positive_value_vector;
use crate::lcp::{solve_bruteforce, LcpInstance, ORACLE_LIMIT};
use crate::linalg::{det, extract_block, has_zero_pattern, min_of, norm2, principal_submatrix, BlockPartition, Matrix, Orientation};
use crate::lp::{feasible, solve_lp, LpProblem, LpStatus};
use crate::tol;

/// Largest dimension for exhaustive minor enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 16;

const SCREEN_TRIALS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Undetermined,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl Verdict {
    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Undetermined,
        }
    }
}

/// Block triangular K test mode. `Strict` also requires every nonzero
/// block on the filled side to be a K-matrix; `Relaxed` only constrains
/// the diagonal blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    #[default]
    Strict,
    Relaxed,
}

pub fn is_z(m: &Matrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j) <= 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorTest {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_minor: Option<f64>,
    /// Smallest minor seen (all of them when the verdict is true).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_minor: Option<f64>,
    pub minors_checked: usize,
    /// `z != 0` with `z_k (Mz)_k <= 0` for all `k`, from the random screen.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub screen_witness: Option<Vec<f64>>,
}

fn minor_scan(m: &Matrix, accept: impl Fn(f64) -> bool) -> Result<MinorTest> {
    if !m.is_square() {
        return Err(Error::Dimension("principal minors need a square matrix".into()));
    }
    let n = m.rows();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { dim: n, limit: EXHAUSTIVE_LIMIT });
    }
    let mut min_minor = f64::INFINITY;
    let mut checked = 0;
    for mask in 1u32..(1u32 << n) {
        let alpha: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let d = det(&principal_submatrix(m, &alpha)?);
        checked += 1;
        min_minor = min_minor.min(d);
        if !accept(d) {
            return Ok(MinorTest {
                verdict: Verdict::False,
                failing_set: Some(alpha),
                failing_minor: Some(d),
                min_minor: Some(min_minor),
                minors_checked: checked,
                screen_witness: None,
            });
        }
    }
    Ok(MinorTest {
        verdict: Verdict::True,
        failing_set: None,
        failing_minor: None,
        min_minor: Some(min_minor),
        minors_checked: checked,
        screen_witness: None,
    })
}

/// Exhaustive P test: every principal minor exceeds `1e-10`.
pub fn is_p(m: &Matrix) -> Result<MinorTest> {
    minor_scan(m, |d| d > tol::MINOR)
}

/// Every principal minor is at least `-1e-10`.
pub fn is_p0(m: &Matrix) -> Result<MinorTest> {
    minor_scan(m, |d| d >= -tol::MINOR)
}

/// P test that degrades to `Undetermined` plus a randomized sign-reversal
/// screen above the exhaustive limit. The screen can only refute.
pub fn p_verdict(m: &Matrix, seed: u64) -> Result<MinorTest> {
    if m.is_square() && m.rows() > EXHAUSTIVE_LIMIT {
        let witness = sign_reversal_screen(m, SCREEN_TRIALS, seed);
        return Ok(MinorTest {
            verdict: if witness.is_some() { Verdict::False } else { Verdict::Undetermined },
            failing_set: None,
            failing_minor: None,
            min_minor: None,
            minors_checked: 0,
            screen_witness: witness,
        });
    }
    is_p(m)
}

/// Looks for `z != 0` whose signs `M` reverses everywhere:
/// `z_k (Mz)_k <= 1e-12 ||z||^2` for every `k`. A P-matrix has none.
pub fn sign_reversal_screen(m: &Matrix, trials: usize, seed: u64) -> Option<Vec<f64>> {
    let n = m.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let nz = norm2(&z);
        if nz == 0.0 {
            continue;
        }
        let mz = m.mul_vec(&z);
        if (0..n).all(|k| z[k] * mz[k] <= 1e-12 * nz * nz) {
            return Some(z);
        }
    }
    None
}

/// Z and P.
pub fn is_k(m: &Matrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::Dimension("is_k needs a square matrix".into()));
    }
    Ok(is_z(m) && is_p(m)?.verdict == Verdict::True)
}

/// Z and P0.
pub fn is_k0(m: &Matrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::Dimension("is_k0 needs a square matrix".into()));
    }
    Ok(is_z(m) && is_p0(m)?.verdict == Verdict::True)
}

fn symmetric_part(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| 0.5 * (m.get(i, j) + m.get(j, i)))
}

/// P0 test on `(M + M^T) / 2`.
pub fn is_psd(m: &Matrix) -> Result<MinorTest> {
    if !m.is_square() {
        return Err(Error::Dimension("is_psd needs a square matrix".into()));
    }
    is_p0(&symmetric_part(m))
}

/// `x >= 0` with `Mx > 0`, from `max t s.t. Mx >= t e, e^T x <= 1`.
pub fn is_s(m: &Matrix) -> Result<Option<Vec<f64>>> {
    if !m.is_square() {
        return Err(Error::Dimension("is_s needs a square matrix".into()));
    }
    let n = m.rows();
    // Variables (x, t); minimize -t.
    let a = Matrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => m.get(i, j),
        (true, false) => -1.0,
        (false, true) => -1.0,
        (false, false) => 0.0,
    });
    let mut b = vec![0.0; n + 1];
    b[n] = -1.0;
    let mut c = vec![0.0; n + 1];
    c[n] = -1.0;
    let sol = solve_lp(&LpProblem::new(c, a, b)?)?;
    if sol.status != LpStatus::Optimal {
        return Ok(None);
    }
    let t = sol.x[n];
    if t <= tol::STRICT {
        return Ok(None);
    }
    let x = sol.x[..n].to_vec();
    if min_of(&m.mul_vec(&x)) > 0.0 {
        return Ok(Some(x));
    }
    // Rounding ate the margin; push slightly into the interior.
    let eps = t / (2.0 * (1.0 + m.norm_inf()));
    let x: Vec<f64> = x.iter().map(|v| v + eps).collect();
    Ok((min_of(&m.mul_vec(&x)) > 0.0).then_some(x))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockTriangularK {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<BlockPartition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl BlockTriangularK {
    pub fn orientation(&self) -> Option<Orientation> {
        self.partition.map(|p| p.orientation)
    }
}

const ORIENTATIONS: [Orientation; 2] = [Orientation::Lower, Orientation::Upper];

/// `None` when `m` is block triangular K under `part`, otherwise the reason.
fn btk_failure(m: &Matrix, part: &BlockPartition, strictness: Strictness) -> Result<Option<String>> {
    if !has_zero_pattern(m, part, part.orientation)? {
        return Ok(Some(format!("zero pattern for {:?} orientation violated", part.orientation)));
    }
    for i in 0..part.block_count {
        for j in 0..part.block_count {
            if part.orientation.is_zero_block(i, j) {
                continue;
            }
            let b = extract_block(m, part, i, j)?;
            if i != j && (strictness == Strictness::Relaxed || b.max_abs() == 0.0) {
                continue;
            }
            if !is_k(&b)? {
                return Ok(Some(format!("block ({}, {}) is not a K-matrix", i + 1, j + 1)));
            }
        }
    }
    Ok(None)
}

/// Tries the lower then the upper zero pattern; reports the first that works.
pub fn is_block_triangular_k(m: &Matrix, block_size: usize, strictness: Strictness) -> Result<BlockTriangularK> {
    if !m.is_square() {
        return Err(Error::Dimension("block triangular test needs a square matrix".into()));
    }
    let mut first_failure = None;
    for o in ORIENTATIONS {
        let part = BlockPartition::for_dim(m.rows(), block_size, o)?;
        match btk_failure(m, &part, strictness)? {
            None => return Ok(BlockTriangularK { holds: true, partition: Some(part), failure: None }),
            Some(f) => {
                // Prefer the message from an orientation whose zero pattern held.
                if first_failure.is_none() || has_zero_pattern(m, &part, o)? {
                    first_failure = Some(f);
                }
            }
        }
    }
    Ok(BlockTriangularK { holds: false, partition: None, failure: first_failure })
}

/// Every diagonal block is a K-matrix (no zero-pattern requirement).
pub fn diagonal_blocks_k(m: &Matrix, block_size: usize) -> Result<bool> {
    let part = BlockPartition::for_dim(m.rows(), block_size, Orientation::Lower)?;
    for i in 0..part.block_count {
        if !is_k(&extract_block(m, &part, i, i)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HiddenCheck {
    pub holds: bool,
    /// `||NX - Y||_inf`.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<BlockPartition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// `NX = Y` (within `1e-8`) with `X`, `Y` block triangular K and all three
/// sharing one zero pattern.
pub fn verify_hidden_block_triangular_k(
    n: &Matrix,
    x: &Matrix,
    y: &Matrix,
    block_size: usize,
    strictness: Strictness,
) -> Result<HiddenCheck> {
    let dim = n.rows();
    for (name, w) in [("N", n), ("X", x), ("Y", y)] {
        if w.rows() != dim || w.cols() != dim {
            return Err(Error::Dimension(format!("{name} is {}x{}, expected {dim}x{dim}", w.rows(), w.cols())));
        }
    }
    let residual = (&(n * x) - y).max_abs();
    let mut failure = None;
    for o in ORIENTATIONS {
        let part = BlockPartition::for_dim(dim, block_size, o)?;
        let reason = if !has_zero_pattern(n, &part, o)? {
            Some(format!("N violates the {o:?} zero pattern"))
        } else if let Some(f) = btk_failure(x, &part, strictness)? {
            Some(format!("X: {f}"))
        } else if let Some(f) = btk_failure(y, &part, strictness)? {
            Some(format!("Y: {f}"))
        } else if residual > tol::WITNESS_RESIDUAL {
            Some(format!("||NX - Y||_inf = {residual:e} exceeds {:e}", tol::WITNESS_RESIDUAL))
        } else {
            None
        };
        match reason {
            None => return Ok(HiddenCheck { holds: true, residual, partition: Some(part), failure: None }),
            Some(r) => {
                if failure.is_none() || has_zero_pattern(n, &part, o)? {
                    failure = Some(r);
                }
            }
        }
    }
    Ok(HiddenCheck { holds: false, residual, partition: None, failure })
}

/// `r, s >= 0` with `r^T X + s^T Y > 0`, found by maximizing the margin
/// `delta` subject to `sum(r + s) <= 1`. `None` when the preconditions
/// (`MX = Y`, `X` and `Y` Z-matrices) fail or `delta <= 1e-9`.
pub fn hidden_z_witness(m: &Matrix, x: &Matrix, y: &Matrix) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = m.rows();
    if !m.is_square() || x.rows() != n || y.rows() != n || !x.is_square() || !y.is_square() {
        return None;
    }
    if !is_z(x) || !is_z(y) || (&(m * x) - y).max_abs() > tol::WITNESS_RESIDUAL {
        return None;
    }
    // Variables (r, s, delta).
    let cols = 2 * n + 1;
    let a = Matrix::from_fn(n + 1, cols, |i, j| {
        if i < n {
            if j < n {
                x.get(j, i)
            } else if j < 2 * n {
                y.get(j - n, i)
            } else {
                -1.0
            }
        } else if j < 2 * n {
            -1.0
        } else {
            0.0
        }
    });
    let mut b = vec![0.0; n + 1];
    b[n] = -1.0;
    let mut c = vec![0.0; cols];
    c[2 * n] = -1.0;
    let sol = solve_lp(&LpProblem::new(c, a, b).ok()?).ok()?;
    if sol.status != LpStatus::Optimal || sol.x[2 * n] <= tol::STRICT {
        return None;
    }
    Some((sol.x[..n].to_vec(), sol.x[n..2 * n].to_vec()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Q0Report {
    pub samples: usize,
    pub feasible: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<f64>>,
    /// A feasible point for the counterexample `q`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasible_point: Option<Vec<f64>>,
    pub conclusion: String,
}

/// `q0_sampling_check_with_probes` without directed probes.
pub fn q0_sampling_check(m: &Matrix, samples: usize, seed: u64) -> Result<Q0Report> {
    q0_sampling_check_with_probes(m, &[], samples, seed)
}

/// Refutation search for Q0: for each candidate `q`, an LP decides
/// feasibility and the oracle decides solvability; stops at the first `q`
/// that is feasible but unsolvable. Probes are tried first and count
/// towards `samples`; the rest are random directions scaled by 0.1, 1, 10
/// in turn.
pub fn q0_sampling_check_with_probes(m: &Matrix, probes: &[Vec<f64>], samples: usize, seed: u64) -> Result<Q0Report> {
    if !m.is_square() {
        return Err(Error::Dimension("Q0 check needs a square matrix".into()));
    }
    let n = m.rows();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge { dim: n, limit: ORACLE_LIMIT });
    }
    if probes.iter().any(|p| p.len() != n) {
        return Err(Error::Dimension(format!("probe vectors must have length {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scales = [0.1, 1.0, 10.0];
    let mut feasible_count = 0;
    for k in 0..samples {
        let q = if k < probes.len() {
            probes[k].clone()
        } else {
            let idx = k - probes.len();
            let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = norm2(&v).max(f64::MIN_POSITIVE);
            let s = scales[idx % scales.len()];
            v.iter_mut().for_each(|x| *x *= s / norm);
            v
        };
        let Some(point) = feasible(m, &q)? else { continue };
        feasible_count += 1;
        let inst = LcpInstance::new(m.clone(), q.clone())?;
        if solve_bruteforce(&inst)?.is_empty() {
            return Ok(Q0Report {
                samples: k + 1,
                feasible: feasible_count,
                counterexample: Some(q),
                feasible_point: Some(point),
                conclusion: format!("counterexample found: feasible but unsolvable q after {} samples", k + 1),
            });
        }
    }
    Ok(Q0Report {
        samples,
        feasible: feasible_count,
        counterexample: None,
        feasible_point: None,
        conclusion: format!("no counterexample found in {samples} samples"),
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassifyOptions {
    pub block_size: Option<usize>,
    pub strictness: Strictness,
    pub witnesses: Option<(Matrix, Matrix)>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HiddenCertificate {
    pub partition: BlockPartition,
    pub residual: f64,
    /// `r^T X > 0`.
    pub r: Vec<f64>,
    /// `s^T Y > 0`.
    pub s: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Certificates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<MinorTest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0: Option<MinorTest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psd: Option<MinorTest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strictness: Option<Strictness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<BlockTriangularK>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hidden: Option<HiddenCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hidden_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub dimension: usize,
    pub verdicts: BTreeMap<String, Verdict>,
    pub certificates: Certificates,
}

impl ClassReport {
    pub fn verdict(&self, class: &str) -> Option<Verdict> {
        self.verdicts.get(class).copied()
    }
}

fn minor_verdict(res: Result<MinorTest>) -> Result<(Verdict, Option<MinorTest>)> {
    match res {
        Ok(t) => Ok((t.verdict, Some(t))),
        Err(Error::TooLarge { .. }) => Ok((Verdict::Undetermined, None)),
        Err(e) => Err(e),
    }
}

/// Runs every predicate. Block verdicts need `block_size`; the hidden
/// verdict needs witnesses.
pub fn classify(m: &Matrix, opts: &ClassifyOptions) -> Result<ClassReport> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("M is {}x{}, expected square", m.rows(), m.cols())));
    }
    let mut verdicts = BTreeMap::new();
    let mut certs = Certificates::default();

    let z = Verdict::from(is_z(m));
    let p = p_verdict(m, opts.seed)?;
    let (p0, p0_cert) = minor_verdict(is_p0(m))?;
    let (psd, psd_cert) = minor_verdict(is_psd(m))?;
    let s = is_s(m)?;
    verdicts.insert("Z".into(), z);
    verdicts.insert("P".into(), p.verdict);
    verdicts.insert("K".into(), z.and(p.verdict));
    verdicts.insert("P0".into(), p0);
    verdicts.insert("K0".into(), z.and(p0));
    verdicts.insert("PSD".into(), psd);
    verdicts.insert("S".into(), Verdict::from(s.is_some()));
    certs.p = Some(p);
    certs.p0 = p0_cert;
    certs.psd = psd_cert;
    certs.s_witness = s;

    if let Some(bs) = opts.block_size {
        verdicts.insert("diagonal_blocks_K".into(), Verdict::from(diagonal_blocks_k(m, bs)?));
        let btk = is_block_triangular_k(m, bs, opts.strictness)?;
        verdicts.insert("block_triangular_K".into(), Verdict::from(btk.holds));
        certs.strictness = Some(opts.strictness);
        certs.block = Some(btk);
    }

    if let Some((x, y)) = &opts.witnesses {
        let bs = opts.block_size.unwrap_or(m.rows());
        let check = verify_hidden_block_triangular_k(m, x, y, bs, opts.strictness)?;
        let mut holds = check.holds;
        if let (true, Some(partition)) = (check.holds, check.partition) {
            match (positive_value_vector(x)?, positive_value_vector(y)?) {
                (Some(r), Some(s)) => {
                    certs.hidden = Some(HiddenCertificate { partition, residual: check.residual, r, s });
                }
                _ => {
                    holds = false;
                    certs.hidden_failure = Some("no strictly positive strategy for X or Y".into());
                }
            }
        } else {
            certs.hidden_failure = check.failure;
        }
        verdicts.insert("hidden_block_triangular_K".into(), Verdict::from(holds));
    }

    Ok(ClassReport { dimension: m.rows(), verdicts, certificates: certs })
}
