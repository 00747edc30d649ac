//! Hadamard derivatives on `(0, inf)` through the logarithmic substitution
//! `f(x) = g(ln x)`: the weighted norm of `D^k f` matches the `L_s` norm of the
//! Marchaud derivative of `g`, so the sharp constants coincide.
//!
//! Run with `cargo run --release --example hadamard`.

use fracineq::analysis::{hadamard_constant, hadamard_weighted_norm, marchaud_lq_norm, ProblemSpec};
use fracineq::funcmodel::{DomainKind, NormSpec, Piece, PiecewiseFunction};

fn main() -> fracineq::Result<()> {
    // g is a C^1 ramp from 0 to 1 on [0, 2].
    let g = PiecewiseFunction::new(
        DomainKind::FullLine,
        vec![0.0, 1.0, 2.0],
        vec![
            Piece::zero(),
            Piece::poly(0.0, vec![0.0, 0.0, 0.5]),
            Piece::poly(2.0, vec![1.0, 0.0, -0.5]),
            Piece::constant(1.0),
        ],
    )?;
    let k = 0.6;
    for s in [NormSpec::Finite(2.0), NormSpec::Infinite] {
        let hadamard = hadamard_weighted_norm(&g, k, 1, s)?;
        let marchaud = marchaud_lq_norm(&g, k, 2, s)?;
        println!("s = {s}: Hadamard {hadamard:.10}, Marchaud {marchaud:.10}");
    }
    let spec = ProblemSpec::uniform(DomainKind::FullLine, k, 2, NormSpec::Infinite)?;
    println!("sharp constant with weighted norms: {:.10}", hadamard_constant(&spec)?.k_sharp);
    Ok(())
}
