//! Writes the data behind Figures 1 to 3 as CSV files: the kernel
//! `Gamma(r-k) R_{r-k}` against `Omega^[r-1]`, their difference `tau`, and the
//! extremal function.
//!
//! Run with `cargo run --example figure_csv -- OUT_DIR` (defaults to the
//! system temporary directory).

use std::fs::File;
use std::path::PathBuf;

use fracineq::catalog::{build_case, CaseId};
use fracineq::cli::write_plot;
use fracineq::funcmodel::NormSpec;

fn main() -> fracineq::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let figures = [
        (CaseId::R2HalflineHigh, 1.5, NormSpec::Infinite),
        (CaseId::R2FulllineLow, 0.5, NormSpec::Infinite),
        (CaseId::R2FulllineHigh, 1.5, NormSpec::Infinite),
        (CaseId::R2HalflineLow, 0.5, NormSpec::Finite(2.0)),
    ];
    for (case, k, s) in figures {
        let pair = build_case(case, k, s, 1.0)?;
        let Some(n) = case.figure() else { continue };
        let path = dir.join(format!("figure{n}.csv"));
        let mut file = File::create(&path).map_err(|e| fracineq::Error::Io(e.to_string()))?;
        write_plot(&mut file, &pair, 301)?;
        println!("figure {n}: {case} -> {}", path.display());
    }
    Ok(())
}
