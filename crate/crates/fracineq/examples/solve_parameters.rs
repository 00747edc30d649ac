//! Parameters of the order-two extremal functions as functions of `k`,
//! obtained by bisection on the defining equations.
//!
//! Run with `cargo run --example solve_parameters`.

use fracineq::funcmodel::NormSpec;
use fracineq::solvers::{solve_equation_fullline_low, solve_system_fullline_high, solve_system_halfline_high};

fn main() -> fracineq::Result<()> {
    let s = NormSpec::Finite(3.0);
    println!("line, k in (0, 1), s = {s}: left end p");
    for j in 1..10 {
        let k = 0.1 * j as f64;
        let sol = solve_equation_fullline_low(k, s)?;
        println!("  k = {k:.1}  p = {:.10}  b = {:.10}", sol.p.unwrap_or(f64::NAN), sol.b);
    }
    println!("half-line, k in (1, 2 - 1/s), s = {s}: (a, b)");
    for j in 1..7 {
        let k = 1.0 + 0.1 * j as f64;
        let sol = solve_system_halfline_high(k, s)?;
        println!("  k = {k:.1}  a = {:.10}  b = {:.10}", sol.a.unwrap_or(f64::NAN), sol.b);
    }
    println!("line, k in (1, 2 - 1/s), s = {s}: (a, b, p)");
    for j in 1..7 {
        let k = 1.0 + 0.1 * j as f64;
        let sol = solve_system_fullline_high(k, s)?;
        println!(
            "  k = {k:.1}  a = {:.8}  b = {:.8}  p = {:.8}",
            sol.a.unwrap_or(f64::NAN),
            sol.b,
            sol.p.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
