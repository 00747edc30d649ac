//! Randomised verification: the inequality on a seeded batch of test
//! functions, the dual representation of `D^k f(0)` through `Omega`, and the
//! location of the maximum of `|D^k Phi|`.
//!
//! Run with `cargo run --release --example verify_batch`.

use fracineq::analysis::ProblemSpec;
use fracineq::catalog::{build_case, CaseId};
use fracineq::funcmodel::NormSpec;
use fracineq::verify::{check_inequality, check_monotone_maximizer, check_relation8};

fn main() -> fracineq::Result<()> {
    let (case, k, s) = (CaseId::R2HalflineHigh, 1.3, NormSpec::Finite(4.0));
    let spec = ProblemSpec::for_case(case, k, s)?;
    let pair = build_case(case, k, s, 1.0)?;
    let reports = [
        check_inequality(&spec, 50, 2024)?,
        check_relation8(&pair, 50, 2024)?,
        check_monotone_maximizer(&pair)?,
    ];
    for r in &reports {
        println!(
            "{:<12} {:<6} max = {:.3e}  violations = {}",
            r.check,
            if r.pass { "pass" } else { "FAIL" },
            r.max_ratio,
            r.violations.len()
        );
    }
    Ok(())
}
