//! Nonlinear systems fixing the parameters of the order-two extremal
//! functions: `(a, b)` on the half-line for `k in (1, 2 - 1/s)`, `p` on the
//! line for `k in (0, 1)`, and `(a, b, p)` on the line for `k in (1, 2 - 1/s)`.
//!
//! Every solve is a bisection driven by the monotonicity of the defining
//! integrals; the monotonicity is sampled and asserted along the way.

use serde::Serialize;

use crate::catalog::CaseId;
use crate::error::{Error, Result};
use crate::funcmodel::NormSpec;
use crate::quad::{integrate_finite, QuadratureSpec};

/// Tolerance of the quadratures inside the solvers.
pub const SOLVER_QUAD_TOL: f64 = 1e-13;

/// Parameters of an extremal function together with the residuals of the
/// equations they solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalParams {
    pub case: CaseId,
    pub k: f64,
    pub s: NormSpec,
    /// Left end of the second plateau (half-line and line, `k > 1`).
    pub a: Option<f64>,
    /// Sign change of `tau` inside `(0, 1)`.
    pub b: f64,
    /// Left end of the support of `tau` on the line.
    pub p: Option<f64>,
    pub residuals: Vec<f64>,
    /// True when the parameters come from the closed-form `s = inf` branch.
    pub closed_form: bool,
}

/// `|x|^q sign x`; `q = 0` gives `sign x`.
pub fn signed_power(x: f64, q: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if q == 0.0 {
        x.signum()
    } else {
        x.abs().powf(q) * x.signum()
    }
}

/// Exponent `s' - 1` applied to `tau`.
pub fn dual_power(s: NormSpec) -> f64 {
    match s {
        NormSpec::Infinite => 0.0,
        NormSpec::Finite(v) => 1.0 / (v - 1.0),
    }
}

/// Plateau values `(c1, c2)` of `omega` for `k in (1, 2)`; `p = 0` gives the half-line case.
pub fn high_plateaus(k: f64, a: f64, b: f64, p: f64) -> (f64, f64) {
    let c2 = (1.0 - b.powf(1.0 - k)) / (1.0 - b);
    let c1 = (1.0 - b - (1.0 - b.powf(1.0 - k)) * (1.0 - a)) / ((1.0 - b) * (a + p));
    (c1, c2)
}

/// `tau(a, b, p; x)` for `k in (1, 2)`; `p = 0` gives the half-line function.
pub fn tau_high(k: f64, a: f64, b: f64, p: f64, x: f64) -> f64 {
    let (c1, c2) = high_plateaus(k, a, b, p);
    if x <= -p || x >= 1.0 {
        0.0
    } else if x <= 0.0 {
        -c1 * (x + p)
    } else if x <= a {
        x.powf(1.0 - k) - c1 * (x + p)
    } else {
        x.powf(1.0 - k) - 1.0 + c2 * (1.0 - x)
    }
}

/// `tau(p; x)` on the line for `k in (0, 1)`.
pub fn tau_low(k: f64, p: f64, x: f64) -> f64 {
    if x <= -p || x >= 1.0 {
        0.0
    } else {
        x.max(0.0).powf(1.0 - k) - (x + p) / (1.0 + p)
    }
}

fn check_k_high(k: f64, s: NormSpec) -> Result<f64> {
    let upper = 2.0 - s.reciprocal();
    if s == NormSpec::Finite(1.0) || !(k > 1.0 && k < upper) {
        return Err(Error::Domain(format!(
            "k must lie in (1, 2 - 1/s) = (1, {upper}) with s > 1, got k = {k}, s = {s}"
        )));
    }
    Ok(dual_power(s))
}

fn check_k_low(k: f64) -> Result<()> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Domain(format!("k must lie in (0, 1), got {k}")));
    }
    Ok(())
}

/// Bisection for an increasing or decreasing function with a sign change on `[lo, hi]`.
pub fn bisect<F: FnMut(f64) -> Result<f64>>(mut f: F, mut lo: f64, mut hi: f64, what: &str) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket(format!(
            "{what}: no sign change on [{lo}, {hi}] (values {flo:.3e}, {fhi:.3e})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn spec_with(left: Option<f64>, right: Option<f64>) -> QuadratureSpec {
    QuadratureSpec {
        left_exponent: left,
        right_exponent: right,
        ..QuadratureSpec::with_tol(SOLVER_QUAD_TOL)
    }
}

/// `int_lo^hi w(t) g(t) dt` over panels split at `cuts`, with `g` vanishing
/// like a power at the declared points.
fn panel_integral<G: Fn(f64) -> f64>(
    g: G,
    weight: usize,
    cuts: &[(f64, Option<f64>, Option<f64>)],
) -> Result<f64> {
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, _, la) = w[0];
        let (b, rb, _) = w[1];
        if b <= a {
            continue;
        }
        let f = |t: f64| t.powi(weight as i32) * g(t);
        total += integrate_finite(f, a, b, &spec_with(la, rb))?.value;
    }
    Ok(total)
}

/// Residuals `(F1, F2)` of the half-line system at `(a, b)`.
pub fn halfline_high_residuals(k: f64, s: NormSpec, a: f64, b: f64) -> Result<(f64, f64)> {
    let q = dual_power(s);
    let g = |t: f64| signed_power(tau_high(k, a, b, 0.0, t), q);
    let e0 = Some((1.0 - k) * q);
    let ez = Some(q);
    let f1 = panel_integral(g, 0, &[(a, None, None), (b, ez, ez), (1.0, ez, None)])?;
    let f2 = panel_integral(g, 1, &[(0.0, None, e0), (a, None, None), (b, ez, ez), (1.0, ez, None)])?;
    Ok((f1, f2))
}

/// Solves `F1 = F2 = 0` for the half-line, `k in (1, 2 - 1/s)`.
pub fn solve_system_halfline_high(k: f64, s: NormSpec) -> Result<ExtremalParams> {
    let q = check_k_high(k, s)?;
    if q == 0.0 {
        let b = 0.5_f64.sqrt();
        let a = 2.0_f64.sqrt() - 1.0;
        assert_sign_pattern(|x| tau_high(k, a, b, 0.0, x), &[(0.0, b, 1.0), (b, 1.0, -1.0)])?;
        return Ok(ExtremalParams {
            case: CaseId::R2HalflineHigh,
            k,
            s,
            a: Some(a),
            b,
            p: None,
            residuals: vec![2.0 * b - a - 1.0, b * b - 0.5],
            closed_form: true,
        });
    }
    let eps = 1e-9;
    let rho = |a: f64| -> Result<Option<f64>> {
        let f2 = |b: f64| halfline_high_residuals(k, s, a, b).map(|r| r.1);
        let lo = f2(a)?;
        let hi = f2(1.0 - eps)?;
        if lo > 0.0 || hi < 0.0 {
            return Ok(None);
        }
        let mid = 0.5 * (a + 1.0 - eps);
        let fm = f2(mid)?;
        if !(lo <= fm && fm <= hi) {
            return Err(Error::Monotonicity(format!(
                "F2({a}, .) is not increasing: {lo:.3e}, {fm:.3e}, {hi:.3e}"
            )));
        }
        bisect(f2, a, 1.0 - eps, "F2(a, b) = 0 in b").map(Some)
    };
    let outer = |a: f64| -> Result<f64> {
        match rho(a)? {
            Some(b) => halfline_high_residuals(k, s, a, b).map(|r| r.0),
            None => Ok(-1.0),
        }
    };
    let a = bisect(outer, eps, 1.0 - eps, "F1(a, rho(a)) = 0 in a")?;
    let b = rho(a)?.ok_or_else(|| Error::Bracket("F2 lost its root at the solution".into()))?;
    let (f1, f2) = halfline_high_residuals(k, s, a, b)?;
    Ok(ExtremalParams {
        case: CaseId::R2HalflineHigh,
        k,
        s,
        a: Some(a),
        b,
        p: None,
        residuals: vec![f1, f2],
        closed_form: false,
    })
}

/// Zero of `tau(p; .)` inside `(0, 1)`.
pub fn tau_low_zero(k: f64, p: f64) -> Result<f64> {
    let xm = ((1.0 - k) * (1.0 + p)).powf(1.0 / k).min(1.0);
    if p == 0.0 {
        return Ok(0.0);
    }
    if tau_low(k, p, xm) <= 0.0 {
        // At p = k/(1-k) the maximum of tau touches zero at x = 1.
        return Ok(xm);
    }
    bisect(|x| Ok(tau_low(k, p, x)), 0.0, xm, "zero of tau(p; .)")
}

/// `Z_s(p)` on the line for `k in (0, 1)`.
pub fn fullline_low_residual(k: f64, s: NormSpec, p: f64) -> Result<f64> {
    let q = dual_power(s);
    let b = tau_low_zero(k, p)?;
    let g = |t: f64| signed_power(tau_low(k, p, t), q);
    let ez = Some(q);
    panel_integral(g, 0, &[(-p, None, ez), (0.0, None, None), (b, ez, ez), (1.0, ez, None)])
}

/// Closed-form root of `Z_1(p) = k^k (1-k)^(1-k) (1+p) - (2k)^(1-k)`.
pub fn z1_root(k: f64) -> f64 {
    (2.0 * k).powf(1.0 - k) / (k.powf(k) * (1.0 - k).powf(1.0 - k)) - 1.0
}

/// Solves `Z_s(p) = 0` (or `Z_1(p) = 0` for `s = 1`) on the line, `k in (0, 1)`.
pub fn solve_equation_fullline_low(k: f64, s: NormSpec) -> Result<ExtremalParams> {
    check_k_low(k)?;
    let pmax = k / (1.0 - k);
    let (p, closed_form, residual) = match s {
        NormSpec::Finite(v) if v == 1.0 => {
            let p = z1_root(k);
            let z = k.powf(k) * (1.0 - k).powf(1.0 - k) * (1.0 + p) - (2.0 * k).powf(1.0 - k);
            (p, true, z)
        }
        NormSpec::Infinite => {
            let b = 2f64.powf(-1.0 / (1.0 - k));
            let p = 1.0 - 2.0 * b;
            assert_sign_pattern(|x| tau_low(k, p, x), &[(-p, b, -1.0), (b, 1.0, 1.0)])?;
            (p, true, 1.0 - 2.0 * b - p)
        }
        NormSpec::Finite(_) => {
            let z = |p: f64| fullline_low_residual(k, s, p);
            let (z0, z1) = (z(0.0)?, z(pmax)?);
            let zm = z(0.5 * pmax)?;
            if !(z0 >= zm && zm >= z1) {
                return Err(Error::Monotonicity(format!(
                    "Z_s is not decreasing on [0, {pmax}]: {z0:.3e}, {zm:.3e}, {z1:.3e}"
                )));
            }
            let p = bisect(z, 0.0, pmax, "Z_s(p) = 0")?;
            (p, false, fullline_low_residual(k, s, p)?)
        }
    };
    let b = tau_low_zero(k, p)?;
    Ok(ExtremalParams {
        case: CaseId::R2FulllineLow,
        k,
        s,
        a: None,
        b,
        p: Some(p),
        residuals: vec![residual],
        closed_form,
    })
}

/// Residuals `(Z1, Z2, Z3)` on the line for `k in (1, 2 - 1/s)`.
pub fn fullline_high_residuals(k: f64, s: NormSpec, a: f64, b: f64, p: f64) -> Result<(f64, f64, f64)> {
    let q = dual_power(s);
    let g = |t: f64| signed_power(tau_high(k, a, b, p, t), q);
    let e0 = Some((1.0 - k) * q);
    let ez = Some(q);
    let z1 = panel_integral(g, 0, &[(-p, None, ez), (0.0, None, e0), (a, None, None)])?;
    let z2 = panel_integral(g, 0, &[(a, None, None), (b, ez, ez), (1.0, ez, None)])?;
    let z3 = panel_integral(
        g,
        1,
        &[(-p, None, ez), (0.0, None, e0), (a, None, None), (b, ez, ez), (1.0, ez, None)],
    )?;
    Ok((z1, z2, z3))
}

/// Solves `Z1 = Z2 = Z3 = 0` on the line for `k in (1, 2 - 1/s)`, returning
/// the first root of `Z3(a, gamma(a), delta(a))` found scanning `a` upward.
pub fn solve_system_fullline_high(k: f64, s: NormSpec) -> Result<ExtremalParams> {
    let q = check_k_high(k, s)?;
    if q == 0.0 {
        let (a, b, p) = (1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0);
        assert_sign_pattern(
            |x| tau_high(k, a, b, p, x),
            &[(-p, 0.0, -1.0), (0.0, b, 1.0), (b, 1.0, -1.0)],
        )?;
        return Ok(ExtremalParams {
            case: CaseId::R2FulllineHigh,
            k,
            s,
            a: Some(a),
            b,
            p: Some(p),
            residuals: vec![a - p, 2.0 * b - a - 1.0, p * p / 2.0 + b * b - 0.5],
            closed_form: true,
        });
    }
    let eps = 1e-9;
    let gamma_of = |a: f64| -> Result<Option<f64>> {
        let z2 = |b: f64| fullline_high_residuals_z2(k, q, a, b);
        if z2(a)? > 0.0 || z2(1.0 - eps)? < 0.0 {
            return Ok(None);
        }
        bisect(z2, a, 1.0 - eps, "Z2(a, b) = 0 in b").map(Some)
    };
    let delta_of = |a: f64, b: f64| -> Result<f64> {
        let z1 = |p: f64| fullline_high_residuals_z1(k, q, a, b, p);
        let mut hi = 1.0;
        while z1(hi)? > 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::Bracket("Z1 keeps its sign as p grows".into()));
            }
        }
        bisect(z1, 0.0, hi, "Z1(a, b, p) = 0 in p")
    };
    let z3_along = |a: f64| -> Result<Option<(f64, f64, f64)>> {
        let Some(b) = gamma_of(a)? else { return Ok(None) };
        let p = delta_of(a, b)?;
        let z3 = fullline_high_residuals(k, s, a, b, p)?.2;
        Ok(Some((z3, b, p)))
    };
    let grid = 64;
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for j in 1..grid {
        let a = j as f64 / grid as f64;
        let Some((z3, _, _)) = z3_along(a)? else { continue };
        if let Some((pa, pz)) = prev {
            if pz.signum() != z3.signum() {
                bracket = Some((pa, a));
                break;
            }
        }
        prev = Some((a, z3));
    }
    let (lo, hi) = bracket.ok_or_else(|| Error::Bracket("Z3 has no sign change along the curve".into()))?;
    let a = bisect(
        |a| z3_along(a)?.map(|v| v.0).ok_or_else(|| Error::Bracket("gamma(a) undefined".into())),
        lo,
        hi,
        "Z3(a, gamma(a), delta(a)) = 0",
    )?;
    let (_, b, p) = z3_along(a)?.ok_or_else(|| Error::Bracket("gamma(a) undefined at the root".into()))?;
    let (z1, z2, z3) = fullline_high_residuals(k, s, a, b, p)?;
    Ok(ExtremalParams {
        case: CaseId::R2FulllineHigh,
        k,
        s,
        a: Some(a),
        b,
        p: Some(p),
        residuals: vec![z1, z2, z3],
        closed_form: false,
    })
}

fn fullline_high_residuals_z2(k: f64, q: f64, a: f64, b: f64) -> Result<f64> {
    let g = |t: f64| signed_power(tau_high(k, a, b, 0.0, t), q);
    let ez = Some(q);
    panel_integral(g, 0, &[(a, None, None), (b, ez, ez), (1.0, ez, None)])
}

fn fullline_high_residuals_z1(k: f64, q: f64, a: f64, b: f64, p: f64) -> Result<f64> {
    let g = |t: f64| signed_power(tau_high(k, a, b, p, t), q);
    let ez = Some(q);
    let e0 = Some((1.0 - k) * q);
    panel_integral(g, 0, &[(-p, None, ez), (0.0, None, e0), (a, None, None)])
}

/// Checks that `f` has the sign `sign` strictly inside each `(lo, hi)` interval.
pub fn assert_sign_pattern<F: Fn(f64) -> f64>(f: F, pattern: &[(f64, f64, f64)]) -> Result<()> {
    for &(lo, hi, sign) in pattern {
        for j in 1..200 {
            let x = lo + (hi - lo) * j as f64 / 200.0;
            let v = f(x);
            if v * sign <= 0.0 {
                return Err(Error::Monotonicity(format!(
                    "tau has the wrong sign at x = {x}: {v:.3e}, expected sign {sign}"
                )));
            }
        }
    }
    Ok(())
}
