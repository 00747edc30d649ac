//! Sharp constants `K` of `||D^k f||_q <= K ||f||_p^(1-lambda) ||f^(r)||_s^lambda`
//! across the catalog, with both certificates: the additive bound minimised
//! over the scale and the value realised by the extremal function.
//!
//! Run with `cargo run --release --example sharp_constants`.

use fracineq::analysis::{sharp_constant, ProblemSpec};
use fracineq::catalog::CaseId;
use fracineq::funcmodel::NormSpec;

fn main() -> fracineq::Result<()> {
    let inf = NormSpec::Infinite;
    let rows = [
        (CaseId::R1Halfline, 0.3, inf),
        (CaseId::R1Fullline, 0.4, NormSpec::Finite(2.5)),
        (CaseId::SteinR1, 0.5, NormSpec::Finite(1.0)),
        (CaseId::ArestovHalfline, 0.5, inf),
        (CaseId::R2HalflineLow, 0.5, NormSpec::Finite(2.0)),
        (CaseId::R2HalflineHigh, 1.5, inf),
        (CaseId::R2FulllineLow, 0.5, inf),
        (CaseId::R2FulllineHigh, 1.5, inf),
    ];
    println!("{:<20} {:>5} {:>5} {:>8} {:>14} {:>14}", "case", "k", "s", "lambda", "K additive", "K extremal");
    for (case, k, s) in rows {
        let res = sharp_constant(&ProblemSpec::for_case(case, k, s)?)?;
        let ext = res.k_extremal.map_or("-".to_string(), |v| format!("{v:.10}"));
        println!(
            "{:<20} {k:>5} {:>5} {:>8.4} {:>14.10} {:>14}",
            case.to_string(),
            s.to_string(),
            res.lambda,
            res.k_additive,
            ext
        );
    }
    Ok(())
}
