//! Walks through the catalog of extremal pairs `(Omega, Phi)` and prints
//! their parameters, the variation of `Omega` and the kernel norm.
//!
//! Run with `cargo run --example extremal_pairs`.

use fracineq::catalog::{build_case, CaseId, Phi};
use fracineq::funcmodel::NormSpec;

fn main() -> fracineq::Result<()> {
    let choices: [(CaseId, f64, NormSpec); 8] = [
        (CaseId::R1Halfline, 0.3, NormSpec::Infinite),
        (CaseId::R1Fullline, 0.4, NormSpec::Finite(2.5)),
        (CaseId::SteinR1, 0.5, NormSpec::Finite(1.0)),
        (CaseId::ArestovHalfline, 0.5, NormSpec::Infinite),
        (CaseId::R2HalflineLow, 0.5, NormSpec::Finite(2.0)),
        (CaseId::R2HalflineHigh, 1.3, NormSpec::Finite(4.0)),
        (CaseId::R2FulllineLow, 0.5, NormSpec::Finite(2.0)),
        (CaseId::R2FulllineHigh, 1.3, NormSpec::Finite(4.0)),
    ];
    for (case, k, s) in choices {
        let pair = build_case(case, k, s, 1.0)?;
        let kind = match &pair.phi {
            Phi::Exact(_) => "exact",
            Phi::Family(_) => "epsilon family",
        };
        println!("{case} (k = {k}, s = {s})");
        println!("  Phi: {kind}");
        if let Some(p) = &pair.params {
            println!("  a = {:?}, b = {:.8}, p = {:?}", p.a, p.b, p.p);
        }
        println!("  Var Omega = {:.10}", pair.measure.total_variation()?);
        // The Stein-type bound measures the kernel in L_1, the others in L_s'.
        let t = if case == CaseId::SteinR1 { NormSpec::Finite(1.0) } else { s.conjugate() };
        println!("  ||R - Omega^[r-1]||_{t} = {:.10}", pair.kernel_norm(t)?);
        let nodes: Vec<String> = pair.tau_nodes().iter().map(|x| format!("{x:.4}")).collect();
        println!("  tau nodes: [{}]", nodes.join(", "));
    }
    Ok(())
}
