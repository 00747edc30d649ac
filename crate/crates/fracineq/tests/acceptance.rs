//! Acceptance checks: one PASS/FAIL line per criterion.
//!
//! Every check compares the library against an oracle computed here from
//! closed forms or from first principles. A criterion listed in
//! [`KNOWN_RED`] is reported as FAIL without failing the run; any other
//! failure makes the process exit with status 1.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fracineq::analysis::{hadamard_constant, hadamard_weighted_norm, marchaud_lq_norm, sharp_constant, ProblemSpec};
use fracineq::catalog::{build_case, CaseId, Phi};
use fracineq::cli::run;
use fracineq::funcmodel::{DomainKind, Func, NormSpec, Piece, PiecewiseFunction};
use fracineq::marchaud::{by_definition, by_representation};
use fracineq::solvers::{solve_equation_fullline_low, solve_system_fullline_high, solve_system_halfline_high};
use fracineq::special::gamma;
use fracineq::verify::{
    check_inequality, check_monotone_maximizer, check_relation8, generate, inequality_ratio, TestFunctionSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INF: NormSpec = NormSpec::Infinite;

/// Criteria whose failure is a documented conflict rather than a defect.
///
/// Figure 2 (line, `k < 1`) has `tau` negative-then-positive on `(0, 1)`;
/// flipping it would break the dual representation checked by criterion 6.
const KNOWN_RED: &[u32] = &[11];

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lib<T>(r: fracineq::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    ensure(took <= limit, format!("{out}; {:.2} s (limit {:.0} s)", took.as_secs_f64(), limit.as_secs_f64()))
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for k in [1.1, 1.5, 1.9] {
        let sol = timed(Duration::from_secs(1), || {
            let sol = lib(solve_system_halfline_high(k, INF))?;
            let a = sol.a.ok_or("no a")?;
            worst = worst.max((a - (2f64.sqrt() - 1.0)).abs()).max((sol.b - 0.5f64.sqrt()).abs());
            Ok(String::new())
        });
        sol?;
    }
    ensure(worst < 1e-10, format!("max error {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    timed(Duration::from_secs(1), || {
        let mut worst = 0.0f64;
        for j in 1..=9 {
            let k = 0.1 + 0.08 * j as f64;
            let p_inf = lib(solve_equation_fullline_low(k, INF))?.p.ok_or("no p")?;
            let p2 = lib(solve_equation_fullline_low(k, NormSpec::Finite(2.0)))?.p.ok_or("no p")?;
            worst = worst
                .max((p_inf - (1.0 - 2f64.powf(-k / (1.0 - k)))).abs())
                .max((p2 - k / (2.0 - k)).abs());
        }
        ensure(worst < 1e-10, format!("max error {worst:.1e}"))
    })
}

fn criterion_3() -> Outcome {
    timed(Duration::from_secs(5), || {
        let mut worst = 0.0f64;
        for k in [1.2, 1.5, 1.8] {
            let sol = lib(solve_system_fullline_high(k, INF))?;
            let (a, p) = (sol.a.ok_or("no a")?, sol.p.ok_or("no p")?);
            worst = worst.max((a - 1.0 / 3.0).abs()).max((sol.b - 2.0 / 3.0).abs()).max((p - 1.0 / 3.0).abs());
        }
        ensure(worst < 1e-10, format!("max error {worst:.1e}"))
    })
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut weakest = f64::INFINITY;
    let one = NormSpec::Finite(1.0);
    for k in [0.25, 0.5, 0.75] {
        let spec = lib(ProblemSpec::new(DomainKind::FullLine, k, 1, one, one, one))?;
        let res = lib(sharp_constant(&spec))?;
        let oracle = 2f64.powf(1.0 - k) / lib(gamma(2.0 - k))?;
        worst = worst.max((res.k_sharp / oracle - 1.0).abs());
        let pair = lib(build_case(CaseId::SteinR1, k, one, 1.0))?;
        let Phi::Family(fam) = &pair.phi else { return Err("Stein case without a family".into()) };
        let member = lib(fam.member(1e-3))?;
        weakest = weakest.min(lib(inequality_ratio(&res, &member))?);
    }
    ensure(
        worst < 1e-8 && weakest >= 0.99,
        format!("max relative error {worst:.1e}; ratio at eps = 1e-3 at least {weakest:.6}"),
    )
}

fn criterion_5() -> Outcome {
    timed(Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (mut def_rep, mut n_dep) = (0.0f64, 0.0f64);
        for i in 0..20 {
            let domain = if i % 2 == 0 { DomainKind::HalfLine } else { DomainKind::FullLine };
            let k = if i % 4 < 2 { 0.2 + 0.6 * rng.gen::<f64>() } else { 1.1 + 0.8 * rng.gen::<f64>() };
            let lo = if domain == DomainKind::HalfLine { rng.gen_range(0.0..1.0) } else { rng.gen_range(-1.5..0.5) };
            let spec = TestFunctionSpec {
                r: 2,
                domain,
                knot_count: rng.gen_range(2..7),
                support: (lo, lo + rng.gen_range(0.5..3.0)),
                seed: rng.gen(),
                compact: false,
            };
            let f = lib(generate(&spec))?;
            let n = k.floor() as usize + 1;
            for j in 0..10 {
                let start = if domain == DomainKind::HalfLine { 0.0 } else { spec.support.0 - 1.0 };
                let x = start + (spec.support.1 + 0.5 - start) * (j as f64 + 0.37) / 10.0;
                let rep = lib(by_representation(&f, k, 2, x))?;
                let scale = 1.0f64.max(rep.abs());
                let d = lib(by_definition(&f, k, n, x))?;
                def_rep = def_rep.max((d - rep).abs() / scale);
                for extra in 1..=2 {
                    let e = lib(by_definition(&f, k, n + extra, x))?;
                    n_dep = n_dep.max((e - d).abs() / scale);
                }
            }
        }
        ensure(def_rep < 1e-7 && n_dep < 1e-7, format!("definition vs representation {def_rep:.1e}; n-dependence {n_dep:.1e}"))
    })
}

fn case_grid() -> Vec<(CaseId, f64, NormSpec)> {
    let fin = NormSpec::Finite;
    vec![
        (CaseId::R1Halfline, 0.3, INF),
        (CaseId::R1Halfline, 0.5, fin(4.0)),
        (CaseId::R1Halfline, 0.2, fin(2.0)),
        (CaseId::R1Fullline, 0.3, INF),
        (CaseId::R1Fullline, 0.5, fin(4.0)),
        (CaseId::R1Fullline, 0.2, fin(2.0)),
        (CaseId::SteinR1, 0.25, fin(1.0)),
        (CaseId::SteinR1, 0.5, fin(1.0)),
        (CaseId::SteinR1, 0.75, fin(1.0)),
        (CaseId::R2HalflineLow, 0.3, INF),
        (CaseId::R2HalflineLow, 0.5, fin(2.0)),
        (CaseId::R2HalflineLow, 0.7, fin(1.0)),
        (CaseId::R2HalflineHigh, 1.5, INF),
        (CaseId::R2HalflineHigh, 1.3, fin(4.0)),
        (CaseId::R2HalflineHigh, 1.2, fin(2.0)),
        (CaseId::R2FulllineLow, 0.5, INF),
        (CaseId::R2FulllineLow, 0.3, fin(2.0)),
        (CaseId::R2FulllineLow, 0.5, fin(1.0)),
        (CaseId::R2FulllineHigh, 1.5, INF),
        (CaseId::R2FulllineHigh, 1.3, fin(4.0)),
        (CaseId::R2FulllineHigh, 1.2, fin(2.0)),
        (CaseId::ArestovHalfline, 0.3, INF),
        (CaseId::ArestovHalfline, 0.5, INF),
        (CaseId::ArestovHalfline, 0.8, INF),
    ]
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    for (case, k, s) in case_grid() {
        let pair = lib(build_case(case, k, s, 1.0))?;
        let report = lib(check_relation8(&pair, 20, 6))?;
        worst = worst.max(report.max_ratio);
        if !report.pass {
            failed.push(format!("{case} k={k} s={s}"));
        }
    }
    ensure(failed.is_empty(), format!("24 (case, k, s) x 20 functions, max residual {worst:.1e}; failing: {failed:?}"))
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for case in CaseId::ALL {
        let (k, s) = match case {
            CaseId::SteinR1 => (0.5, NormSpec::Finite(1.0)),
            CaseId::R2HalflineHigh | CaseId::R2FulllineHigh => (1.4, NormSpec::Finite(3.0)),
            CaseId::ArestovHalfline => (0.5, INF),
            _ => (0.4, NormSpec::Finite(3.0)),
        };
        let spec = lib(ProblemSpec::for_case(case, k, s))?;
        let report = lib(check_inequality(&spec, 100, 7))?;
        let attained = report.attained_fraction.unwrap_or(f64::NAN);
        ok &= report.pass && report.max_ratio <= 1.0 + 1e-6;
        lines.push(format!("{case}: max {:.6}, attained {attained:.6}", report.max_ratio));
    }
    ensure(ok, lines.join("; "))
}

/// `D^k Phi(0)` from the power rule: `Phi''` is piecewise constant and
/// vanishes beyond its last knot, so `Phi = c + sum_i d_i (x_i - x)_+^2 / 2`
/// with `d_i` the drop of `Phi''` at `x_i`, and
/// `D^k (x_i - x)_+^2 / 2 = x_i^(2-k) / Gamma(3-k)` at `0`.
fn power_oracle_at_zero(phi: &PiecewiseFunction, k: f64) -> Result<f64, String> {
    let top = phi.derivative_n(2);
    let g = lib(gamma(3.0 - k))?;
    Ok(top
        .breakpoints()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| (top.left_limit(x) - top.eval(x)) * x.powf(2.0 - k) / g)
        .sum())
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for k in [0.2, 0.5, 0.8] {
        let pair = lib(build_case(CaseId::ArestovHalfline, k, INF, 1.0))?;
        let Phi::Exact(Func::Piecewise(phi)) = &pair.phi else { return Err("no piecewise extremal function".into()) };
        let d0 = power_oracle_at_zero(phi, k)?;
        let nr = lib(phi.derivative_n(2).sup_norm())?;
        // Normalised to ||Phi''|| = 1 the oracle must give 1 / Gamma(3-k).
        let unit = (d0 / nr - 1.0 / lib(gamma(3.0 - k))?).abs() * lib(gamma(3.0 - k))?;
        let scan = lib(check_monotone_maximizer(&pair))?;
        let n0 = lib(phi.sup_norm())?;
        let oracle = d0.abs() / (n0.powf(1.0 - k / 2.0) * nr.powf(k / 2.0));
        let closed = 2f64.powf(2.0 - k) / lib(gamma(3.0 - k))?;
        let spec = lib(ProblemSpec::for_case(CaseId::ArestovHalfline, k, INF))?;
        let res = lib(sharp_constant(&spec))?;
        worst = worst.max((oracle / closed - 1.0).abs()).max((res.k_sharp / closed - 1.0).abs()).max(unit);
        if !scan.pass {
            return Err(format!("k = {k}: maximiser not at zero: {:?}", scan.notes));
        }
        details.push(format!("k={k}: K={:.10}", res.k_sharp));
    }
    ensure(worst < 1e-8, format!("max relative error {worst:.1e}; maximiser at 0; {}", details.join(", ")))
}

/// Maximum of a concave function by ternary search.
fn concave_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..300 {
        let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    f(0.5 * (lo + hi))
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0f64;
    for (case, k) in [(CaseId::R1Halfline, 0.3), (CaseId::R2HalflineLow, 0.5), (CaseId::R2FulllineHigh, 1.5)] {
        let res = lib(sharp_constant(&lib(ProblemSpec::for_case(case, k, INF))?))?;
        let omega = |d: f64| res.k_sharp * d.powf(1.0 - res.lambda);
        for n in [0.5, 2.0, 10.0] {
            // Grid in delta, then ternary refinement around the best node.
            let grid: Vec<f64> = (0..=4000).map(|i| (-20.0 + 40.0 * i as f64 / 4000.0).exp()).collect();
            let j = (0..grid.len())
                .max_by(|&a, &b| (omega(grid[a]) - n * grid[a]).total_cmp(&(omega(grid[b]) - n * grid[b])))
                .unwrap_or(0);
            let (lo, hi) = (grid[j.saturating_sub(1)], grid[(j + 1).min(grid.len() - 1)]);
            let oracle = concave_max(|d| omega(d) - n * d, lo, hi);
            worst = worst.max((lib(res.stechkin_value(n))? / oracle - 1.0).abs());
        }
        for delta in [1e-3, 0.1, 2.0] {
            let oracle = -concave_max(|u: f64| -(res.stechkin_value(u.exp()).unwrap_or(f64::NAN) + u.exp() * delta), -60.0, 60.0);
            worst = worst.max((lib(res.recovery_error(delta))? / oracle - 1.0).abs());
        }
    }
    ensure(worst < 1e-6, format!("3 cases x (3 N + 3 delta), max relative error {worst:.1e}"))
}

/// `C^1` test functions on the line supported in `(0, inf)`.
fn hadamard_functions() -> Result<Vec<PiecewiseFunction>, String> {
    let full = DomainKind::FullLine;
    let ramp = |a: f64, w: f64, height: f64| {
        let c = 4.0 * height / (w * w);
        PiecewiseFunction::new(
            full,
            vec![a, a + w / 2.0, a + w],
            vec![
                Piece::zero(),
                Piece::poly(a, vec![0.0, 0.0, c / 2.0]),
                Piece::poly(a + w, vec![height, 0.0, -c / 2.0]),
                Piece::constant(height),
            ],
        )
    };
    let bump = |a: f64, w: f64| {
        PiecewiseFunction::new(
            full,
            vec![a, a + w / 4.0, a + 3.0 * w / 4.0, a + w],
            vec![
                Piece::zero(),
                Piece::poly(a, vec![0.0, 0.0, 1.0]),
                Piece::poly(a + w / 2.0, vec![w * w / 8.0, 0.0, -1.0]),
                Piece::poly(a + w, vec![0.0, 0.0, 1.0]),
                Piece::zero(),
            ],
        )
    };
    lib(vec![ramp(0.0, 2.0, 1.0), ramp(0.5, 1.0, -0.7), bump(0.2, 2.0), bump(1.0, 0.5), ramp(0.3, 3.0, 2.0)]
        .into_iter()
        .collect())
}

fn criterion_10() -> Outcome {
    let k = 0.6;
    let mut worst = 0.0f64;
    for g in hadamard_functions()? {
        for s in [NormSpec::Finite(2.0), INF] {
            let h = lib(hadamard_weighted_norm(&g, k, 1, s))?;
            let m = lib(marchaud_lq_norm(&g, k, 2, s))?;
            worst = worst.max((h - m).abs() / m.max(1.0));
        }
    }
    let mut equal = true;
    for (k, s) in [(0.5, INF), (1.5, INF), (0.4, NormSpec::Finite(2.0))] {
        let spec = lib(ProblemSpec::uniform(DomainKind::FullLine, k, 2, s))?;
        equal &= lib(hadamard_constant(&spec))?.k_sharp == lib(sharp_constant(&spec))?.k_sharp;
    }
    ensure(worst < 1e-6 && equal, format!("5 functions x s in {{2, inf}}, max error {worst:.1e}; constants identical: {equal}"))
}

/// Sign pattern of `tau` on `(0, 1)` read back from the plot CSV.
fn tau_pattern(case: CaseId, k: f64, dir: &std::path::Path) -> Result<(u8, String, bool), String> {
    let path = dir.join(format!("{case}.csv"));
    let path_str = path.to_str().ok_or("non-utf8 path")?;
    let args = ["fracineq", "extremal", "--case", case.name(), "--k", &k.to_string(), "--s", "inf", "--plot", path_str, "--points", "2001"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    if run(args, &mut out, &mut err) != 0 {
        return Err(String::from_utf8_lossy(&err).into_owned());
    }
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let caption = lines.next().unwrap_or_default();
    let figure = caption
        .strip_prefix("# Figure ")
        .and_then(|t| t.split_whitespace().next())
        .and_then(|t| t.parse().ok())
        .ok_or(format!("caption does not name a figure: {caption}"))?;
    let mut signs: Vec<char> = Vec::new();
    for line in lines.skip(1) {
        let cols: Vec<f64> = line.split(',').filter_map(|c| c.parse().ok()).collect();
        let (x, tau) = (cols[0], cols[3]);
        if x > 0.0 && x < 1.0 && tau.abs() > 1e-9 {
            let c = if tau > 0.0 { '+' } else { '-' };
            if signs.last() != Some(&c) {
                signs.push(c);
            }
        }
    }
    let pattern: String = signs.into_iter().collect();
    let ok = pattern == "+-";
    Ok((figure, pattern, ok))
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (case, k) in [(CaseId::R2HalflineHigh, 1.5), (CaseId::R2FulllineLow, 0.5), (CaseId::R2FulllineHigh, 1.5)] {
        let (figure, pattern, good) = tau_pattern(case, k, dir.path())?;
        ok &= good;
        parts.push(format!("Figure {figure}: {pattern}"));
    }
    ensure(ok, format!("tau signs on (0,1): {} (expected +- for each)", parts.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "half-line k>1 closed-form parameters", criterion_1),
        (2, "line k<1 closed-form p", criterion_2),
        (3, "line k>1 closed-form parameters", criterion_3),
        (4, "Stein constant and Steklov ladder", criterion_4),
        (5, "definition vs representation", criterion_5),
        (6, "dual representation residual", criterion_6),
        (7, "inequality batches and extremality", criterion_7),
        (8, "Arestov half-line constant", criterion_8),
        (9, "Stechkin and recovery duality", criterion_9),
        (10, "Hadamard transfer", criterion_10),
        (11, "figure data tau sign pattern", criterion_11),
    ];
    let mut unexpected = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_RED.contains(&id);
        match outcome {
            Ok(detail) => {
                println!("PASS {id:>2} {name}: {detail} [{secs:.1} s]");
                if known {
                    println!("     note: criterion {id} is listed as known red but passed");
                }
            }
            Err(detail) => {
                let tag = if known { " (known conflict, see the decisions ledger)" } else { "" };
                println!("FAIL {id:>2} {name}: {detail}{tag} [{secs:.1} s]");
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
