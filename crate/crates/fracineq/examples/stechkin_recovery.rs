//! Best approximation of `D^k` by bounded operators and optimal recovery of
//! `D^k f` from inexact data, both read off the sharp constant.
//!
//! Run with `cargo run --release --example stechkin_recovery`.

use fracineq::analysis::{sharp_constant, ProblemSpec};
use fracineq::catalog::CaseId;
use fracineq::funcmodel::NormSpec;

fn main() -> fracineq::Result<()> {
    let spec = ProblemSpec::for_case(CaseId::R2HalflineLow, 0.5, NormSpec::Infinite)?;
    let res = sharp_constant(&spec)?;
    println!("half-line, r = 2, k = 0.5, uniform norms: K = {:.10}", res.k_sharp);
    println!("{:>10} {:>16}", "N", "E_N");
    for n in [0.5, 1.0, 2.0, 5.0, 10.0, 100.0] {
        println!("{n:>10} {:>16.10}", res.stechkin_value(n)?);
    }
    println!("{:>10} {:>16}", "delta", "recovery error");
    for delta in [1e-1, 1e-2, 1e-3, 1e-4] {
        println!("{delta:>10.0e} {:>16.10}", res.recovery_error(delta)?);
    }
    Ok(())
}
