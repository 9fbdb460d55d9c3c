//! Lives in its own test binary: it sets `LCPK_TOL` for the whole process.

use lcpk::lcp::{LcpInstance, LcpSolution, Method};
use lcpk::Matrix;

#[test]
fn lcpk_tol_overrides_the_assertion_tolerance() {
    let inst = LcpInstance::new(Matrix::identity(1), vec![0.0]).unwrap();
    // z^T w = 1e-6: outside the default 1e-7, inside 1e-5.
    let sol = LcpSolution::new(&inst, vec![1e-3], vec![1e-3], Method::Lemke);
    assert!(!sol.meets_contract());
    std::env::set_var("LCPK_TOL", "1e-5");
    assert!(sol.meets_contract());
    std::env::set_var("LCPK_TOL", "not a number");
    assert!(!sol.meets_contract());
    std::env::remove_var("LCPK_TOL");
}
