//! Property-test harness: seeded random test functions and batch checks of
//! the inequality, the dual representation and the position of the maximum
//! of `|D^k Phi|`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{marchaud_lq_norm, sharp_constant, ProblemSpec, SharpResult};
use crate::catalog::{ExtremalPair, Phi};
use crate::error::{Error, Result};
use crate::funcmodel::{DomainKind, Func, Piece, PiecewiseFunction};
use crate::marchaud::{by_representation, sup_norm_scan};
use crate::quad::{integrate_finite, QuadratureSpec};
use crate::special::kernel_r;

/// Tolerance separating quadrature error from genuine violations.
pub const VIOLATION_TOL: f64 = 1e-6;

/// Tolerance of the dual-representation residual, relative to `1 + ||f^(r)||`.
pub const RELATION_TOL: f64 = 1e-8;

/// Recipe for a random test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFunctionSpec {
    pub r: usize,
    pub domain: DomainKind,
    pub knot_count: usize,
    /// Interval carrying `f^(r)`.
    pub support: (f64, f64),
    pub seed: u64,
    /// Requests `f` itself to vanish outside the support.
    pub compact: bool,
}

/// Random `f` whose `r`-th derivative is piecewise cubic and supported in
/// `spec.support`, with exact derivatives up to order `r`.
///
/// The moments of `f^(r)` that would make `f` unbounded (or, with
/// `compact`, non-zero at infinity) are projected out.
pub fn generate(spec: &TestFunctionSpec) -> Result<PiecewiseFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    generate_with(spec, &mut rng)
}

fn generate_with(spec: &TestFunctionSpec, rng: &mut ChaCha8Rng) -> Result<PiecewiseFunction> {
    let (lo, hi) = spec.support;
    if !(lo < hi) || spec.r == 0 || spec.knot_count == 0 {
        return Err(Error::Domain("test functions need lo < hi, r >= 1 and knots".into()));
    }
    if spec.domain == DomainKind::HalfLine && lo < 0.0 {
        return Err(Error::Domain("half-line support must start at or after 0".into()));
    }
    let mut knots: Vec<f64> = (0..spec.knot_count - 1).map(|_| rng.gen_range(lo..hi)).collect();
    knots.push(lo);
    knots.push(hi);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut pieces: Vec<Piece> = knots
        .windows(2)
        .map(|w| Piece::poly(w[0], (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()))
        .collect();
    let moments = if spec.compact { spec.r } else { spec.r - 1 };
    project_moments(&mut pieces, &knots, moments)?;
    let (bps, mut all) = match spec.domain {
        DomainKind::FullLine => (knots.clone(), vec![Piece::zero()]),
        DomainKind::HalfLine if lo == 0.0 => (knots[1..].to_vec(), Vec::new()),
        DomainKind::HalfLine => (knots.clone(), vec![Piece::zero()]),
    };
    all.extend(pieces);
    all.push(Piece::zero());
    let top = PiecewiseFunction::new(spec.domain, bps, all)?;
    let mut f = top.repeated_integral(spec.r)?;
    if !spec.compact {
        let c = rng.gen_range(-1.0..1.0);
        f = f.add(&PiecewiseFunction::constant(spec.domain, c))?;
    }
    let f = f.with_constant_tail(1e-8)?;
    if !spec.compact {
        return Ok(f);
    }
    let residue = f.right_constant().unwrap_or(0.0);
    if residue.abs() > 1e-8 * f.sup_norm()?.max(1.0) {
        return Err(Error::Divergence(format!("compact test function leaves a tail {residue}")));
    }
    let mut pieces = f.pieces().to_vec();
    *pieces.last_mut().expect("non-empty") = Piece::zero();
    PiecewiseFunction::new(f.domain(), f.breakpoints().to_vec(), pieces)
}

/// Makes `int t^j g = 0` for `j < m` by subtracting the projection of `g`
/// onto the polynomials of degree below `m` on the support.
fn project_moments(pieces: &mut [Piece], knots: &[f64], m: usize) -> Result<()> {
    if m == 0 {
        return Ok(());
    }
    let (lo, hi) = (knots[0], knots[knots.len() - 1]);
    let spec = QuadratureSpec::with_tol(1e-14);
    let inner = |pieces: &[Piece], poly: &Piece| -> Result<f64> {
        let mut total = 0.0;
        for (p, w) in pieces.iter().zip(knots.windows(2)) {
            total += integrate_finite(|t| p.eval(t) * poly.eval(t), w[0], w[1], &spec)?.value;
        }
        Ok(total)
    };
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    for j in 0..m {
        let legendre = legendre_on(j, mid, half);
        let norm2 = half * 2.0 / (2 * j + 1) as f64;
        let c = inner(pieces, &legendre)? / norm2;
        for p in pieces.iter_mut() {
            *p = p.add(&legendre.scaled(-c));
        }
    }
    Ok(())
}

/// Legendre polynomial `P_j((t - mid) / half)` as a piece.
fn legendre_on(j: usize, mid: f64, half: f64) -> Piece {
    let mut prev = vec![1.0];
    let mut cur = vec![0.0, 1.0];
    let coeffs = match j {
        0 => prev,
        _ => {
            for n in 1..j {
                let n = n as f64;
                let mut next = vec![0.0; cur.len() + 1];
                for (i, &c) in cur.iter().enumerate() {
                    next[i + 1] += (2.0 * n + 1.0) * c / (n + 1.0);
                }
                for (i, &c) in prev.iter().enumerate() {
                    next[i] -= n * c / (n + 1.0);
                }
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    let scaled: Vec<f64> = coeffs.iter().enumerate().map(|(i, c)| c / half.powi(i as i32)).collect();
    Piece::poly(mid, scaled)
}

/// Default recipe for a case: support around the extremal scale.
pub fn default_test_spec(spec: &ProblemSpec, seed: u64) -> TestFunctionSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let width = rng.gen_range(0.5..4.0);
    let lo = match spec.domain {
        DomainKind::HalfLine => {
            if rng.gen_bool(0.3) {
                0.0
            } else {
                rng.gen_range(0.0..1.0)
            }
        }
        DomainKind::FullLine => rng.gen_range(-2.0..0.5),
    };
    TestFunctionSpec {
        r: spec.r,
        domain: spec.domain,
        knot_count: rng.gen_range(2..8),
        support: (lo, lo + width),
        seed,
        compact: !spec.p.is_infinite(),
    }
}

/// Seed of batch item `i`: stream `i` of the ChaCha generator keyed by `seed`.
pub fn item_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// Test function number `i` of a batch.
pub fn batch_function(spec: &ProblemSpec, seed: u64, i: usize) -> Result<PiecewiseFunction> {
    let recipe = default_test_spec(spec, item_rng(seed, i).gen());
    generate(&recipe)
}

/// Result of a batch check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub case: String,
    pub batch: usize,
    pub seed: u64,
    /// Largest ratio (inequality) or residual (other checks) over the batch.
    pub max_ratio: f64,
    pub residuals: Vec<f64>,
    /// Indices of batch items violating the tolerance.
    pub violations: Vec<usize>,
    /// Ratio attained by the extremal function or the last ladder member.
    pub attained_fraction: Option<f64>,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// `||D^k f||_q / (K ||f||_p^mu ||f^(r)||_s^lambda)`.
pub fn inequality_ratio(result: &SharpResult, f: &PiecewiseFunction) -> Result<f64> {
    let lhs = marchaud_lq_norm(f, result.k, result.r, result.q)?;
    let n0 = f.lp_norm(result.p)?;
    let nr = Func::from(f.clone()).derivative_norm(result.r, result.s)?;
    if n0 == 0.0 || nr == 0.0 {
        return Ok(0.0);
    }
    Ok(lhs / result.multiplicative_bound(n0, nr))
}

fn extremal_ratio(result: &SharpResult, phi: &Func) -> Result<f64> {
    let lhs = sup_norm_scan(phi, result.k, result.r)?.value;
    let rhs = result.multiplicative_bound(phi.norm(result.p)?, phi.derivative_norm(result.r, result.s)?);
    Ok(lhs / rhs)
}

/// Checks the sharp inequality on `batch` random functions and on the
/// case's extremal function (or epsilon ladder).
pub fn check_inequality(spec: &ProblemSpec, batch: usize, seed: u64) -> Result<Report> {
    let result = sharp_constant(spec)?;
    let pair = crate::catalog::build_case(result.case, spec.k, spec.s, 1.0)?;
    let ratios: Vec<f64> = (0..batch)
        .into_par_iter()
        .map(|i| batch_function(spec, seed, i).and_then(|f| inequality_ratio(&result, &f)))
        .collect::<Result<_>>()?;
    let violations: Vec<usize> = ratios
        .iter()
        .enumerate()
        .filter(|(_, &v)| !(v <= 1.0 + VIOLATION_TOL))
        .map(|(i, _)| i)
        .collect();
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let mut notes = Vec::new();
    let (attained, extremal_ok) = match &pair.phi {
        Phi::Exact(phi) => {
            let ratio = extremal_ratio(&result, phi)?;
            notes.push(format!("extremal function ratio {ratio:.12}"));
            (Some(ratio), (1.0 - 1e-5..=1.0 + VIOLATION_TOL).contains(&ratio))
        }
        Phi::Family(_) => {
            let ladder = &result.ladder;
            let monotone = ladder.windows(2).all(|w| w[1].ratio >= w[0].ratio - 1e-12);
            let last = ladder.last().map(|s| s.ratio);
            for step in ladder {
                notes.push(format!("eps {:e}: ratio {:.12}", step.eps, step.ratio));
            }
            let bounded = ladder.iter().all(|s| s.ratio <= 1.0 + VIOLATION_TOL);
            (last, monotone && bounded)
        }
    };
    Ok(Report {
        check: "inequality".into(),
        case: result.case.to_string(),
        batch,
        seed,
        max_ratio,
        residuals: ratios,
        pass: violations.is_empty() && extremal_ok,
        violations,
        attained_fraction: attained,
        notes,
    })
}

/// Both sides of the dual representation
/// `D^k f(0) - int f dOmega = (-1)^r int (R_{r-k} - Omega^[r-1]) f^(r)`.
///
/// The kernel difference is rebuilt from `Omega` by repeated integration.
pub fn relation8_sides(pair: &ExtremalPair, f: &PiecewiseFunction) -> Result<(f64, f64)> {
    let r = pair.r();
    let k = pair.k;
    let top = f.derivative_n(r);
    if top.pieces().last().is_some_and(|p| !p.is_zero()) {
        return Err(Error::Unsupported("f^(r) must have bounded support".into()));
    }
    let lhs = by_representation(f, k, r, 0.0)? - pair.measure.integrate(&Func::from(f.clone()))?;
    let big = pair.omega_integral()?;
    let diff = |x: f64| kernel_r(r as f64 - k, x).unwrap_or(f64::NAN) - big.eval(x);
    let mut points: Vec<f64> = f.breakpoints().to_vec();
    points.extend(big.breakpoints().iter().copied());
    points.push(0.0);
    points.sort_by(f64::total_cmp);
    points.dedup();
    if f.domain() == DomainKind::HalfLine {
        points.retain(|&x| x >= 0.0);
    }
    let spec = QuadratureSpec::default();
    let beta = r as f64 - 1.0 - k;
    let mut total = 0.0;
    for w in points.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if top.eval(mid) == 0.0 && top.left_limit(w[1]) == 0.0 && top.eval(w[0]) == 0.0 {
            continue;
        }
        let s = QuadratureSpec {
            left_exponent: (w[0] == 0.0).then_some(beta),
            ..spec
        };
        total += integrate_finite(|x| diff(x) * top.eval(x), w[0], w[1], &s)?.value;
    }
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok((lhs, sign * total))
}

/// Checks the dual representation on `batch` random functions.
pub fn check_relation8(pair: &ExtremalPair, batch: usize, seed: u64) -> Result<Report> {
    let (p, q) = pair.case.pq();
    let spec = ProblemSpec::new(pair.domain(), pair.k, pair.r(), p, q, pair.s)?;
    let items: Vec<(f64, f64)> = (0..batch)
        .into_par_iter()
        .map(|i| {
            let f = batch_function(&spec, seed, i)?;
            let (lhs, rhs) = relation8_sides(pair, &f)?;
            let scale = 1.0 + Func::from(f.clone()).derivative_norm(pair.r(), crate::funcmodel::NormSpec::Infinite)?;
            Ok(((lhs - rhs).abs(), scale))
        })
        .collect::<Result<_>>()?;
    let residuals: Vec<f64> = items.iter().map(|(r, _)| *r).collect();
    let violations: Vec<usize> = items
        .iter()
        .enumerate()
        .filter(|(_, (r, s))| !(*r < RELATION_TOL * s))
        .map(|(i, _)| i)
        .collect();
    Ok(Report {
        check: "relation8".into(),
        case: pair.case.to_string(),
        batch,
        seed,
        max_ratio: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
        pass: violations.is_empty(),
        violations,
        attained_fraction: None,
        notes: Vec::new(),
    })
}

/// Checks that `|D^k Phi|` is largest at `0`.
pub fn check_monotone_maximizer(pair: &ExtremalPair) -> Result<Report> {
    let Phi::Exact(phi) = &pair.phi else {
        return Err(Error::Unsupported(format!(
            "{} has no extremal function, only an approximating family",
            pair.case
        )));
    };
    let scan = sup_norm_scan(phi, pair.k, pair.r())?;
    let at_zero = phi.marchaud(pair.k, pair.r(), 0.0)?.abs();
    let gap = scan.value - at_zero;
    Ok(Report {
        check: "maximizer".into(),
        case: pair.case.to_string(),
        batch: 1,
        seed: 0,
        max_ratio: gap,
        residuals: vec![gap],
        violations: if gap <= 1e-8 { Vec::new() } else { vec![0] },
        attained_fraction: None,
        pass: gap <= 1e-8,
        notes: vec![format!(
            "max |D^k Phi| = {:.12} at x = {:.6}; |D^k Phi(0)| = {at_zero:.12}",
            scan.value, scan.argmax
        )],
    })
}
