//! Normalising constants of the Marchaud derivative.
//!
//! Prints `kappa(k, n)` for several orders and shows that it changes with the
//! number of differences `n` while `D^k` itself does not.
//!
//! Run with `cargo run --example kappa_table`.

use fracineq::special::{gamma, kappa, FracOrder};

fn main() -> fracineq::Result<()> {
    println!("{:>6} {:>4} {:>16} {:>16}", "k", "n", "kappa(k, n)", "Gamma(-k)");
    for &k in &[0.25, 0.5, 0.75, 1.25, 1.5, 1.75] {
        let order = FracOrder::new(k, 2)?;
        for n in order.default_n()..=4 {
            println!("{k:>6} {n:>4} {:>16.10} {:>16.10}", kappa(k, n)?, gamma(-k)?);
        }
    }
    Ok(())
}
