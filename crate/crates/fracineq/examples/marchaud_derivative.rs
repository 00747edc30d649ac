//! Marchaud derivative of a piecewise polynomial, computed from the defining
//! integral of finite differences and from the derivative representation.
//!
//! Run with `cargo run --example marchaud_derivative`.

use fracineq::funcmodel::{DomainKind, Piece, PiecewiseFunction};
use fracineq::marchaud::{by_definition, by_representation};

fn main() -> fracineq::Result<()> {
    // A C^1 bump: (1 - x^2)^2 on [-1, 1], zero elsewhere.
    let bump = PiecewiseFunction::new(
        DomainKind::FullLine,
        vec![-1.0, 1.0],
        vec![
            Piece::zero(),
            Piece::poly(0.0, vec![1.0, 0.0, -2.0, 0.0, 1.0]),
            Piece::zero(),
        ],
    )?;
    let k = 1.4;
    println!("D^{k} of (1 - x^2)^2 on the line");
    println!("{:>6} {:>18} {:>18} {:>18}", "x", "definition n=2", "definition n=3", "representation r=2");
    for j in 0..=8 {
        let x = -1.2 + 0.3 * j as f64;
        println!(
            "{x:>6.2} {:>18.12} {:>18.12} {:>18.12}",
            by_definition(&bump, k, 2, x)?,
            by_definition(&bump, k, 3, x)?,
            by_representation(&bump, k, 2, x)?,
        );
    }
    Ok(())
}
