//! Numerical thresholds shared across the solvers.
//!
//! Pivot thresholds are fixed. Only the assertion tolerance used when
//! judging residual contracts can be overridden, through `LCPK_TOL`.

/// Elimination pivots below this magnitude mean "singular".
pub const SINGULAR_PIVOT: f64 = 1e-12;

/// Smallest tableau entry accepted as a ratio-test candidate.
pub const PIVOT: f64 = 1e-9;

/// Pivots smaller than this are a numerical breakdown.
pub const BREAKDOWN: f64 = 1e-11;

/// Principal minors above this count as positive.
pub const MINOR: f64 = 1e-10;

/// Allowed `||NX - Y||_inf` for hidden witnesses.
pub const WITNESS_RESIDUAL: f64 = 1e-8;

/// Strict-positivity margin for game strategies and S-witnesses.
pub const STRICT: f64 = 1e-9;

/// Margin for the dual certificate `(I - M^T) y + p > 0`.
pub const CERTIFICATE: f64 = 1e-10;

/// Distinct oracle solutions differ by more than this in the infinity norm.
pub const DEDUP: f64 = 1e-7;

/// Feasibility tolerance for `z >= 0, Mz + q >= 0` membership tests.
pub const FEASIBLE: f64 = 1e-8;

/// Default tolerance for complementarity assertions.
pub const ASSERTION: f64 = 1e-7;

/// Assertion tolerance, honouring the `LCPK_TOL` environment variable.
pub fn assertion_tolerance() -> f64 {
    std::env::var("LCPK_TOL")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(ASSERTION)
}
