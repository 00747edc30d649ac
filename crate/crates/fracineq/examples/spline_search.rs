//! Independent lower bound on a sharp constant from a seeded random search
//! over splines, compared with the certified value.
//!
//! Run with `cargo run --release --example spline_search`.

use fracineq::analysis::{sharp_constant, spline_search_lower_bound, ProblemSpec};
use fracineq::funcmodel::{DomainKind, NormSpec};

fn main() -> fracineq::Result<()> {
    for (k, s) in [(0.5, NormSpec::Infinite), (0.5, NormSpec::Finite(2.0)), (1.5, NormSpec::Infinite)] {
        let spec = ProblemSpec::uniform(DomainKind::FullLine, k, 2, s)?;
        let sharp = sharp_constant(&spec)?.k_sharp;
        let lower = spline_search_lower_bound(&spec, 12, 16, 7)?;
        println!("k = {k}, s = {s}: search {lower:.6} <= K = {sharp:.6} ({:.1}%)", 100.0 * lower / sharp);
    }
    Ok(())
}
