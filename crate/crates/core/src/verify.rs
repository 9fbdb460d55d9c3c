//! Property suites run against a single instance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::classify::{is_block_triangular_k, is_z, q0_sampling_check, Strictness};
use crate::error::{Error, Result};
use crate::generate::{raise_z, uniform_q};
use crate::lcp::{
    build_augmented, check_augmented_certificate, derive_p_hidden, least_element_with, sample_feasible,
    solve_augmented, solve_bruteforce, LcpInstance,
};
use crate::linalg::{inverse, meet};
use crate::lp::feasible;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Lattice,
    Least,
    Inverse,
    Q0,
    Augmented,
}

impl Suite {
    const EACH: [Suite; 5] = [Suite::Lattice, Suite::Least, Suite::Inverse, Suite::Q0, Suite::Augmented];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub suite: Suite,
    pub property: String,
    pub status: Status,
    pub checked: usize,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
}

impl PropertyResult {
    fn new(suite: Suite, property: &str, status: Status, checked: usize, detail: impl Into<String>) -> Self {
        Self { suite, property: property.into(), status, checked, detail: detail.into(), counterexample: None }
    }

    fn with_counterexample(mut self, value: serde_json::Value) -> Self {
        self.counterexample = Some(value);
        self
    }
}

/// Runs a suite with `samples` random trials per property. A named suite
/// whose precondition fails returns the error; `All` reports it as skipped.
pub fn run_suite(inst: &LcpInstance, suite: Suite, samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    match suite {
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::EACH {
                match run_suite(inst, s, samples, seed) {
                    Ok(r) => out.extend(r),
                    Err(e @ (Error::ClassCheck(_) | Error::Witness(_) | Error::NotStrict { .. } | Error::TooLarge { .. })) => {
                        out.push(PropertyResult::new(s, "precondition", Status::Skipped, 0, e.to_string()));
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(out)
        }
        Suite::Lattice => lattice(inst, samples, seed),
        Suite::Least => least(inst, samples, seed),
        Suite::Inverse => inverse_suite(inst, samples, seed),
        Suite::Q0 => q0(inst, samples, seed),
        Suite::Augmented => augmented(inst, samples, seed),
    }
}

fn require_block_triangular_k(inst: &LcpInstance) -> Result<()> {
    let bs = inst.partition.map_or(inst.dim(), |p| p.block_size);
    let check = is_block_triangular_k(&inst.m, bs, Strictness::Relaxed)?;
    if check.holds {
        Ok(())
    } else {
        Err(Error::ClassCheck(format!(
            "not block triangular K: {}",
            check.failure.unwrap_or_default()
        )))
    }
}

fn lattice(inst: &LcpInstance, samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    require_block_triangular_k(inst)?;
    let name = "meet_closed";
    let points = match sample_feasible(&inst.m, &inst.q, 2 * samples, seed) {
        Ok(p) => p,
        Err(Error::Infeasible) => {
            return Ok(vec![PropertyResult::new(Suite::Lattice, name, Status::Skipped, 0, "feasible set is empty")]);
        }
        Err(e) => return Err(e),
    };
    let mut checked = 0;
    for pair in points.chunks_exact(2) {
        let m = meet(&pair[0], &pair[1])?;
        let v = inst.infeasibility(&m);
        checked += 1;
        if v > tol::FEASIBLE {
            return Ok(vec![PropertyResult::new(Suite::Lattice, name, Status::Fail, checked, format!("meet violates feasibility by {v:e}"))
                .with_counterexample(json!({"x": pair[0], "y": pair[1], "meet": m}))]);
        }
    }
    Ok(vec![PropertyResult::new(Suite::Lattice, name, Status::Pass, checked, "every sampled meet is feasible")])
}

fn least(inst: &LcpInstance, samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    let name = "least_element_solves";
    match least_element_with(inst, samples, seed) {
        Ok(le) => Ok(vec![PropertyResult::new(
            Suite::Least,
            name,
            Status::Pass,
            le.samples_checked,
            format!("LP minimizer {:?} is below every sample and solves the LCP", le.solution.z),
        )]),
        Err(Error::NotLeast(detail)) => Ok(vec![PropertyResult::new(Suite::Least, name, Status::Fail, samples, detail)]),
        Err(Error::Infeasible) => Ok(vec![PropertyResult::new(Suite::Least, name, Status::Skipped, 0, "feasible set is empty")]),
        Err(e) => Err(e),
    }
}

fn inverse_suite(inst: &LcpInstance, samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    require_block_triangular_k(inst)?;
    let mut out = Vec::new();
    let inv = inverse(&inst.m)?;
    let min = inv.min_entry();
    let r = PropertyResult::new(
        Suite::Inverse,
        "inverse_nonnegative",
        if min >= -1e-9 { Status::Pass } else { Status::Fail },
        1,
        format!("min entry of M^-1 is {min:e}"),
    );
    out.push(if min >= -1e-9 { r } else { r.with_counterexample(json!({"inverse": inv.to_rows()})) });

    let name = "inverse_comparison";
    if !is_z(&inst.m) {
        out.push(PropertyResult::new(Suite::Inverse, name, Status::Skipped, 0, "M is not a Z-matrix"));
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..samples {
        let n = raise_z(&inst.m, &mut rng);
        let inv_n = inverse(&n)?;
        let gap = (&inv - &inv_n).min_entry();
        let low = inv_n.min_entry();
        if gap < -1e-9 || low < -1e-9 {
            out.push(
                PropertyResult::new(Suite::Inverse, name, Status::Fail, k + 1, format!("min(M^-1 - N^-1) = {gap:e}, min N^-1 = {low:e}"))
                    .with_counterexample(json!({"N": n.to_rows()})),
            );
            return Ok(out);
        }
    }
    out.push(PropertyResult::new(Suite::Inverse, name, Status::Pass, samples, "M^-1 >= N^-1 >= 0 for every sampled N >= M"));
    Ok(out)
}

fn q0(inst: &LcpInstance, samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    let rep = q0_sampling_check(&inst.m, samples, seed)?;
    let status = if rep.counterexample.is_some() { Status::Fail } else { Status::Pass };
    let mut r = PropertyResult::new(Suite::Q0, "feasible_implies_solvable", status, rep.samples, rep.conclusion.clone());
    if let Some(q) = &rep.counterexample {
        r = r.with_counterexample(json!({"q": q, "feasible_point": rep.feasible_point}));
    }
    Ok(vec![r])
}

fn augmented(inst: &LcpInstance, samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    let h = derive_p_hidden(inst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut qs = vec![inst.q.clone()];
    while qs.len() < samples.max(1) {
        qs.push(uniform_q(inst.dim(), &mut rng));
    }

    let mut equivalence: Option<PropertyResult> = None;
    let mut feasibility: Option<PropertyResult> = None;
    let mut certificate: Option<PropertyResult> = None;
    for (k, q) in qs.iter().enumerate() {
        let case = inst.with_q(q.clone())?;
        let solvable = !solve_bruteforce(&case)?.is_empty();
        let via_aug = solve_augmented(&case)?.solution().is_some();
        if equivalence.is_none() && solvable != via_aug {
            equivalence = Some(
                PropertyResult::new(
                    Suite::Augmented,
                    "solvable_iff_augmented_solvable",
                    Status::Fail,
                    k + 1,
                    format!("oracle solvable = {solvable}, augmented x-part valid = {via_aug}"),
                )
                .with_counterexample(json!({"q": q})),
            );
        }
        let Some(x) = feasible(&inst.m, q)? else { continue };
        let case_aug = build_augmented(&case, &h.r, &h.s)?;
        match check_augmented_certificate(&case_aug, &x, &h.s, &h.p) {
            Ok(true) => {}
            Ok(false) if certificate.is_none() => {
                certificate = Some(
                    PropertyResult::new(Suite::Augmented, "dual_certificate", Status::Fail, k + 1, "(I - N^T) y + p is not positive at y = s")
                        .with_counterexample(json!({"q": q, "x": x})),
                );
            }
            Ok(false) => {}
            Err(Error::InfeasiblePoint { violation }) if feasibility.is_none() => {
                feasibility = Some(
                    PropertyResult::new(
                        Suite::Augmented,
                        "feasible_implies_augmented_feasible",
                        Status::Fail,
                        k + 1,
                        format!("(x, s) violates augmented feasibility by {violation:e}"),
                    )
                    .with_counterexample(json!({"q": q, "x": x})),
                );
            }
            Err(Error::InfeasiblePoint { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let n = qs.len();
    Ok(vec![
        equivalence.unwrap_or_else(|| {
            PropertyResult::new(Suite::Augmented, "solvable_iff_augmented_solvable", Status::Pass, n, "oracle and augmented Lemke agree")
        }),
        feasibility.unwrap_or_else(|| {
            PropertyResult::new(Suite::Augmented, "feasible_implies_augmented_feasible", Status::Pass, n, "(x, s) is augmented-feasible")
        }),
        certificate.unwrap_or_else(|| {
            PropertyResult::new(Suite::Augmented, "dual_certificate", Status::Pass, n, "(I - N^T) s + p > 0")
        }),
    ])
}

/// Whether every result passed or was skipped.
pub fn all_passed(results: &[PropertyResult]) -> bool {
    results.iter().all(|r| r.status != Status::Fail)
}
