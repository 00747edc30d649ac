//! Which triples `(||f||, ||D^k f||, ||f^(r)||)` can be realised: the sharp
//! inequality draws the boundary of the feasible region.
//!
//! Run with `cargo run --release --example three_numbers`.

use fracineq::analysis::{sharp_constant, ProblemSpec};
use fracineq::catalog::CaseId;
use fracineq::funcmodel::NormSpec;

fn main() -> fracineq::Result<()> {
    let spec = ProblemSpec::for_case(CaseId::R2FulllineHigh, 1.5, NormSpec::Infinite)?;
    let res = sharp_constant(&spec)?;
    let (m0, mr) = (1.0, 4.0);
    let bound = res.multiplicative_bound(m0, mr);
    println!("line, r = 2, k = 1.5: M0 = {m0}, Mr = {mr}, largest Mk = {bound:.10}");
    for factor in [0.5, 0.99, 1.0, 1.01, 2.0] {
        let mk = factor * bound;
        let t = res.three_numbers(m0, mk, mr)?;
        println!("  Mk = {mk:>14.10}: {:?} (on boundary: {})", t.verdict, t.on_boundary);
    }
    Ok(())
}
