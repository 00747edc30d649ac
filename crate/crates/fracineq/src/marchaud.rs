//! Marchaud fractional derivatives: by definition through forward
//! differences, through the derivative representation, the Hadamard-type
//! variant on the half-line, and sup-norm scans of `D^k f`.

use crate::error::{Error, Result};
use crate::funcmodel::{taylor_shift, DomainKind, Func, Piece, PiecewiseFunction};
use crate::quad::{integrate_finite, integrate_semi_infinite, QuadratureSpec};
use crate::special::{binomial, difference_moment, gamma, kappa};

/// Forward difference `Delta^n_t f(x) = sum_m (-1)^m C(n, m) f(x + m t)`.
pub fn finite_difference<F: Fn(f64) -> f64>(f: F, x: f64, t: f64, n: usize) -> f64 {
    (0..=n)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, m) * f(x + m as f64 * t)
        })
        .sum()
}

fn check_orders(k: f64, n: usize) -> Result<()> {
    if !(k > 0.0) || k.fract() == 0.0 || (n as f64) <= k {
        return Err(Error::Domain(format!(
            "need non-integer k > 0 and n > k, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// Kinks `t = (b - x) / m` of `t -> Delta^n_t f(x)`, sorted, positive.
fn difference_kinks(points: &[f64], x: f64, n: usize) -> Vec<f64> {
    let mut ts: Vec<f64> = points
        .iter()
        .filter(|&&b| b > x)
        .flat_map(|&b| (1..=n).map(move |m| (b - x) / m as f64))
        .collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// `D^k f(x)` from the defining integral for a piecewise function.
///
/// The segment next to `t = 0` and a polynomial right tail are integrated in
/// closed form; the remaining segments use adaptive quadrature.
pub fn by_definition(f: &PiecewiseFunction, k: f64, n: usize, x: f64) -> Result<f64> {
    check_orders(k, n)?;
    if f.domain() == DomainKind::HalfLine && x < 0.0 {
        return Err(Error::Domain(format!("x = {x} lies outside the half-line")));
    }
    let ts = difference_kinks(f.breakpoints(), x, n);
    let spec = QuadratureSpec::default();
    let fx = f.eval(x);
    let here = &f.pieces()[f.breakpoints().partition_point(|&b| b <= x)];
    let diff = |t: f64| finite_difference(|y| f.eval(y), x, t, n) * t.powf(-1.0 - k);
    let mut total = 0.0;
    if let Some(&t1) = ts.first() {
        total += near_zero(here, x, t1, k, n, &spec)?;
    }
    for w in ts.windows(2) {
        total += integrate_finite(diff, w[0], w[1], &spec)?.value;
    }
    let tail_start = ts.last().copied();
    let tail = f.pieces().last().expect("non-empty");
    total += match tail_start {
        None => near_zero_unbounded(here, x, k, n, &spec)?,
        Some(t) => right_tail(tail, fx, x, t, k, n, &spec)?,
    };
    Ok(total / kappa(k, n)?)
}

/// `int_0^t1 Delta^n_t f(x) t^(-1-k) dt` when every `x + m t` stays in `piece`.
fn near_zero(piece: &Piece, x: f64, t1: f64, k: f64, n: usize, spec: &QuadratureSpec) -> Result<f64> {
    let e = taylor_shift(&piece.coeffs, x - piece.origin);
    let mut total = 0.0;
    for (j, &c) in e.iter().enumerate().skip(n) {
        let s = difference_moment(n, j);
        total += c * s * t1.powf(j as f64 - k) / (j as f64 - k);
    }
    Ok(total + power_part(piece, x, 0.0, t1, k, n, spec)?)
}

fn near_zero_unbounded(piece: &Piece, x: f64, k: f64, n: usize, spec: &QuadratureSpec) -> Result<f64> {
    if piece.coeffs.iter().skip(1).any(|&c| c != 0.0) {
        return Err(Error::Divergence("polynomial growth makes the derivative diverge".into()));
    }
    if piece.is_polynomial() {
        return Ok(0.0);
    }
    let head = near_zero(piece, x, 1.0, k, n, spec)?;
    Ok(head + power_tail(piece, x, 1.0, k, n, spec)?)
}

/// Contribution of the power terms of `piece` over `[a, b]`.
fn power_part(piece: &Piece, x: f64, a: f64, b: f64, k: f64, n: usize, spec: &QuadratureSpec) -> Result<f64> {
    if piece.is_polynomial() {
        return Ok(0.0);
    }
    if x == 0.0 && a == 0.0 {
        let mut total = 0.0;
        for p in &piece.powers {
            if !(p.exponent > k) {
                return Err(Error::Divergence(format!(
                    "power x^{} is too rough at 0 for order {k}",
                    p.exponent
                )));
            }
            let s: f64 = (1..=n)
                .map(|m| {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(n, m) * (m as f64).powf(p.exponent)
                })
                .sum();
            total += p.coef * s * b.powf(p.exponent - k) / (p.exponent - k);
        }
        return Ok(total);
    }
    let g = |t: f64| {
        let d: f64 = (0..=n)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let y = x + m as f64 * t;
                sign * binomial(n, m) * piece.powers.iter().map(|p| p.coef * y.powf(p.exponent)).sum::<f64>()
            })
            .sum();
        d * t.powf(-1.0 - k)
    };
    let s = if a == 0.0 { spec.left(n as f64 - 1.0 - k) } else { *spec };
    Ok(integrate_finite(g, a, b, &s)?.value)
}

fn power_tail(piece: &Piece, x: f64, a: f64, k: f64, n: usize, spec: &QuadratureSpec) -> Result<f64> {
    let e = piece.max_power_exponent().unwrap_or(0.0).max(0.0);
    if e >= k {
        return Err(Error::Divergence("right tail grows too fast for the derivative".into()));
    }
    let g = |t: f64| {
        let d: f64 = (1..=n)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let y = x + m as f64 * t;
                sign * binomial(n, m) * piece.powers.iter().map(|p| p.coef * y.powf(p.exponent)).sum::<f64>()
            })
            .sum();
        d * t.powf(-1.0 - k)
    };
    Ok(integrate_semi_infinite(g, a, 1.0 + k - e, spec)?.value)
}

/// `int_T^inf Delta^n_t f(x) t^(-1-k) dt` when `x + m t` lies in the tail for `m >= 1`.
fn right_tail(tail: &Piece, fx: f64, x: f64, t0: f64, k: f64, n: usize, spec: &QuadratureSpec) -> Result<f64> {
    let q = taylor_shift(&tail.coeffs, x - tail.origin);
    if q.len() > n && q[n..].iter().any(|&c| c != 0.0) {
        return Err(Error::Divergence("polynomial right tail of degree >= n".into()));
    }
    let q0 = q.first().copied().unwrap_or(0.0);
    let mut total = (fx - q0) * t0.powf(-k) / k;
    for (j, &c) in q.iter().enumerate().skip(1) {
        let s = difference_moment(n, j);
        if c != 0.0 && s != 0.0 {
            return Err(Error::Divergence("polynomial right tail makes the derivative diverge".into()));
        }
    }
    if !tail.is_polynomial() {
        total += power_tail(tail, x, t0, k, n, spec)?;
    }
    Ok(total)
}

/// `D^k f(x)` from the defining integral for a general bounded function.
///
/// `kinks` lists the points where `f` may fail to be smooth; when
/// `right_constant` is given, `f` equals it beyond the last kink.
pub fn by_definition_fn<F: Fn(f64) -> f64>(
    f: F,
    kinks: &[f64],
    right_constant: Option<f64>,
    k: f64,
    n: usize,
    x: f64,
) -> Result<f64> {
    check_orders(k, n)?;
    let ts = difference_kinks(kinks, x, n);
    let spec = QuadratureSpec::default();
    let diff = |t: f64| finite_difference(&f, x, t, n) * t.powf(-1.0 - k);
    let mut points = vec![0.0];
    points.extend(ts.iter().copied());
    let t_end = match (right_constant, ts.last()) {
        (Some(_), Some(&t)) => t,
        _ => *points.last().expect("non-empty") + 1.0,
    };
    if points.last() != Some(&t_end) {
        points.push(t_end);
    }
    let mut total = 0.0;
    for (i, w) in points.windows(2).enumerate() {
        let s = if i == 0 { spec.left(n as f64 - 1.0 - k) } else { spec };
        total += integrate_finite(diff, w[0], w[1], &s)?.value;
    }
    total += match (right_constant, ts.last()) {
        (Some(c), Some(_)) => (f(x) - c) * t_end.powf(-k) / k,
        _ => integrate_semi_infinite(diff, t_end, 1.0 + k, &spec)?.value,
    };
    Ok(total / kappa(k, n)?)
}

/// `D^k f(x)` through the representation
/// `(-1)^r / Gamma(r - k) int_0^inf t^(r-1-k) f^(r)(x + t) dt`,
/// with jumps of `f^(r-1)` entering as point masses.
pub fn by_representation(f: &PiecewiseFunction, k: f64, r: usize, x: f64) -> Result<f64> {
    if !(k > 0.0 && k < r as f64) || k.fract() == 0.0 {
        return Err(Error::Domain(format!("order k = {k} must be non-integer in (0, {r})")));
    }
    let beta = r as f64 - 1.0 - k;
    let mut low = f.clone();
    for j in 0..r.saturating_sub(1) {
        let scale = low.sup_norm().unwrap_or(1.0).max(1.0);
        if low.jumps().iter().any(|&(b, v)| b > x && v.abs() > 1e-12 * scale) {
            return Err(Error::Divergence(format!(
                "derivative of order {j} jumps, the representation of order {r} does not apply"
            )));
        }
        low = low.derivative();
    }
    let top = low.derivative();
    let spec = QuadratureSpec::default();
    let mut total = 0.0;
    let noise = 1e-12 * low.sup_norm().unwrap_or(1.0).max(1.0);
    for (b, v) in low.jumps() {
        if b < x || v.abs() <= noise {
            continue;
        }
        if b == x {
            if beta < 0.0 {
                return Err(Error::Divergence(format!("point mass at x = {x} with r - 1 - k < 0")));
            }
            if beta == 0.0 {
                total += v;
            }
            continue;
        }
        total += v * (b - x).powf(beta);
    }
    for (i, piece) in top.pieces().iter().enumerate() {
        if piece.is_zero() {
            continue;
        }
        let (lo, hi) = top.interval(i);
        if hi <= x {
            continue;
        }
        let a = lo.max(x);
        total += if a == x {
            rep_from_x(piece, x, hi, beta, &spec)?
        } else {
            rep_away(piece, x, a, hi, beta, &spec)?
        };
    }
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * total / gamma(r as f64 - k)?)
}

/// `int_x^hi (y - x)^beta piece(y) dy` with the polynomial part in closed form.
fn rep_from_x(piece: &Piece, x: f64, hi: f64, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    let e = taylor_shift(&piece.coeffs, x - piece.origin);
    let mut total = 0.0;
    if hi == f64::INFINITY {
        if e.iter().any(|&c| c != 0.0) {
            return Err(Error::Divergence("non-decaying polynomial tail in the representation".into()));
        }
    } else {
        let w = hi - x;
        for (j, &c) in e.iter().enumerate() {
            let p = beta + j as f64 + 1.0;
            total += c * w.powf(p) / p;
        }
    }
    if piece.is_polynomial() {
        return Ok(total);
    }
    let g = |y: f64| (y - x).powf(beta) * piece.powers.iter().map(|p| p.coef * y.powf(p.exponent)).sum::<f64>();
    let left = beta + if x == 0.0 { piece.min_power_exponent().unwrap_or(0.0).min(0.0) } else { 0.0 };
    if hi == f64::INFINITY {
        let e = piece.max_power_exponent().unwrap_or(0.0);
        let decay = -(beta + e);
        let mid = x + 1.0;
        let head = integrate_finite(g, x, mid, &spec.left(left))?.value;
        return Ok(total + head + integrate_semi_infinite(g, mid, decay, spec)?.value);
    }
    Ok(total + integrate_finite(g, x, hi, &spec.left(left))?.value)
}

fn rep_away(piece: &Piece, x: f64, a: f64, hi: f64, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    let g = |y: f64| (y - x).powf(beta) * piece.eval(y);
    if hi == f64::INFINITY {
        if piece.coeffs.iter().any(|&c| c != 0.0) {
            return Err(Error::Divergence("non-decaying polynomial tail in the representation".into()));
        }
        let e = piece.max_power_exponent().unwrap_or(0.0);
        return Ok(integrate_semi_infinite(g, a, -(beta + e), spec)?.value);
    }
    let s = match piece.min_power_exponent().filter(|&e| e < 0.0 && a == 0.0) {
        Some(e) => spec.left(e),
        None => *spec,
    };
    Ok(integrate_finite(g, a, hi, &s)?.value)
}

/// Expansion of `D^k f(x)` for `x` far to the left of the non-smooth points
/// of `f`: with `x0` the first breakpoint and `y = x0 - x`,
/// `D^k f(x) = (-1)^r / Gamma(r-k) sum_m C(beta, m) y^(beta-m) M_m`, where
/// `M_m` are the moments of `f^(r)` (jumps of `f^(r-1)` included) about `x0`.
///
/// The series converges for `y` larger than the width of the breakpoint set
/// and avoids the cancellation of the direct representation there.
#[derive(Debug, Clone)]
pub struct LeftExpansion {
    x0: f64,
    width: f64,
    beta: f64,
    scale: f64,
    moments: Vec<f64>,
}

impl LeftExpansion {
    /// Number of moments kept.
    pub const TERMS: usize = 80;

    pub fn new(f: &PiecewiseFunction, k: f64, r: usize) -> Result<Self> {
        let bps = f.breakpoints();
        let (Some(&x0), Some(&last)) = (bps.first(), bps.last()) else {
            return Err(Error::Domain("expansion needs at least one breakpoint".into()));
        };
        if f.right_constant().is_none() || !f.pieces()[0].is_constant() {
            return Err(Error::Unsupported("expansion needs constant tails".into()));
        }
        let low = f.derivative_n(r - 1);
        let top = low.derivative();
        let spec = QuadratureSpec::with_tol(1e-15);
        let width = (last - x0).max(f64::MIN_POSITIVE);
        let mut moments = vec![0.0; Self::TERMS];
        for (m, slot) in moments.iter_mut().enumerate() {
            let (mut total, mut size) = (0.0, 0.0);
            for (b, v) in low.jumps() {
                let w = ((b - x0) / width).powi(m as i32);
                total += v * w;
                size += (v * w).abs();
            }
            for (i, piece) in top.pieces().iter().enumerate() {
                let (lo, hi) = top.interval(i);
                if piece.is_zero() || !lo.is_finite() || !hi.is_finite() {
                    continue;
                }
                let w = |t: f64| ((t - x0) / width).powi(m as i32);
                total += integrate_finite(|t| piece.eval(t) * w(t), lo, hi, &spec)?.value;
                size += integrate_finite(|t| (piece.eval(t) * w(t)).abs(), lo, hi, &spec)?.value;
            }
            // Moments cancelling to rounding level vanish exactly; keeping the
            // residue would spoil the decay of the expansion.
            *slot = if total.abs() <= 1e-12 * size { 0.0 } else { total };
        }
        let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(Self {
            x0,
            width,
            beta: r as f64 - 1.0 - k,
            scale: sign / gamma(r as f64 - k)?,
            moments,
        })
    }

    /// Points `x <= valid_below()` are evaluated accurately.
    pub fn valid_below(&self) -> f64 {
        self.x0 - 2.0 * self.width
    }

    pub fn eval(&self, x: f64) -> f64 {
        let y = self.x0 - x;
        let ratio = self.width / y;
        let mut coef = 1.0;
        let mut power = 1.0;
        let mut total = 0.0;
        for (m, &mm) in self.moments.iter().enumerate() {
            total += coef * power * mm;
            coef *= (self.beta - m as f64) / (m as f64 + 1.0);
            power *= ratio;
        }
        self.scale * y.powf(self.beta) * total
    }
}

/// Hadamard derivative `D^k f(x)` on `(0, inf)` from its defining integral
/// `1/kappa(k, n) int_1^inf sum_m (-1)^m C(n, m) f(u^m x) du / (u ln(u)^(1+k))`.
///
/// The integral is taken in `v = ln u`. On `[0, eta]` the difference is
/// replaced by its expansion `c_n v^n + ... + c_(n+3) v^(n+3)`, fitted at
/// `eta 2^-i`, which avoids cancellation next to `v = 0`.
///
/// `kinks` are the non-smooth points of `f` in `(0, inf)`; `f` must equal
/// `right_constant` beyond the last one.
pub fn hadamard_derivative<F: Fn(f64) -> f64>(
    f: F,
    kinks: &[f64],
    right_constant: f64,
    k: f64,
    n: usize,
    x: f64,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("Hadamard derivative needs x > 0, got {x}")));
    }
    hadamard_derivative_log(f, kinks, right_constant, k, n, x.ln())
}

/// [`hadamard_derivative`] at `x = exp(ln_x)`; arguments of `f` are formed as
/// `exp(ln_x + m v)`, so `x` may lie far outside the range of `f64`.
pub fn hadamard_derivative_log<F: Fn(f64) -> f64>(
    f: F,
    kinks: &[f64],
    right_constant: f64,
    k: f64,
    n: usize,
    ln_x: f64,
) -> Result<f64> {
    check_orders(k, n)?;
    if !ln_x.is_finite() {
        return Err(Error::Domain(format!("Hadamard derivative needs a finite ln x, got {ln_x}")));
    }
    let ln_kinks: Vec<f64> = kinks.iter().map(|c| c.ln()).collect();
    let last = ln_kinks.iter().copied().fold(ln_x, f64::max);
    let v_end = (last - ln_x).max(1.0);
    let mut vs: Vec<f64> = vec![v_end];
    for &c in ln_kinks.iter().filter(|&&c| c > ln_x) {
        for m in 1..=n {
            vs.push((c - ln_x) / m as f64);
        }
    }
    vs.sort_by(f64::total_cmp);
    vs.dedup();
    let diff = |v: f64| -> f64 {
        (0..=n)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(n, m) * f((ln_x + m as f64 * v).exp())
            })
            .sum()
    };
    // Rounding noise in the difference contributes about eps * eta^-k.
    let eta = HADAMARD_ETA.max(HADAMARD_NOISE_GAIN.powf(-1.0 / k)).min(0.5 * vs[0]);
    let mut total = near_zero_model(&diff, n, k, eta);
    let spec = QuadratureSpec::default();
    let mut lo = eta;
    for &hi in vs.iter().filter(|&&v| v > eta) {
        while lo < hi {
            let next = (4.0 * lo).min(hi);
            // Rounding in the difference limits the attainable accuracy near v = 0.
            let size: f64 = (0..=n)
                .map(|m| binomial(n, m) * f((ln_x + m as f64 * lo).exp()).abs())
                .sum();
            let floor = 64.0 * f64::EPSILON * size * lo.powf(-1.0 - k) * (next - lo);
            let panel = QuadratureSpec {
                abs_tol: spec.abs_tol.max(floor),
                ..spec
            };
            total += integrate_finite(|v| diff(v) * v.powf(-1.0 - k), lo, next, &panel)?.value;
            lo = next;
        }
    }
    total += (f(ln_x.exp()) - right_constant) * v_end.powf(-k) / k;
    Ok(total / kappa(k, n)?)
}

/// Smallest length of the initial interval handled by the series model.
const HADAMARD_ETA: f64 = 1e-5;

/// Admissible amplification `eta^-k` of rounding noise near `v = 0`.
const HADAMARD_NOISE_GAIN: f64 = 4.5e3;

/// `int_0^eta d(v) v^(-1-k) dv` for `d(v) = sum_j c_j v^(n+j)`, `j < 4`,
/// with the coefficients fitted at `eta 2^-i`, `i < 4`.
fn near_zero_model<D: Fn(f64) -> f64>(diff: &D, n: usize, k: f64, eta: f64) -> f64 {
    const TERMS: usize = 4;
    let mut a = [[0.0; TERMS]; TERMS];
    let mut rhs = [0.0; TERMS];
    for i in 0..TERMS {
        let w = 0.5f64.powi(i as i32);
        for (j, cell) in a[i].iter_mut().enumerate() {
            *cell = w.powi((n + j) as i32);
        }
        rhs[i] = diff(eta * w);
    }
    // Gaussian elimination with partial pivoting on the 4 x 4 system.
    for col in 0..TERMS {
        let piv = (col..TERMS)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap_or(col);
        a.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..TERMS {
            let factor = a[row][col] / a[col][col];
            for j in col..TERMS {
                a[row][j] -= factor * a[col][j];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut d = [0.0; TERMS];
    for row in (0..TERMS).rev() {
        let tail: f64 = (row + 1..TERMS).map(|j| a[row][j] * d[j]).sum();
        d[row] = (rhs[row] - tail) / a[row][row];
    }
    let nf = n as f64;
    eta.powf(-k) * d.iter().enumerate().map(|(j, dj)| dj / (nf + j as f64 - k)).sum::<f64>()
}

/// Supremum of `|D^k f|` and a point where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupScan {
    pub value: f64,
    pub argmax: f64,
}

/// Scans `|D^k f|` over a window around the non-smooth points of `f`.
pub fn sup_norm_scan(f: &Func, k: f64, r: usize) -> Result<SupScan> {
    let keys = f.key_points();
    let (mut lo, hi) = match (keys.first(), keys.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0.0, 1.0),
    };
    let width = (hi - lo).max(1e-3);
    lo = match f.domain() {
        DomainKind::HalfLine => 0.0,
        DomainKind::FullLine => lo - width,
    };
    let eval = |x: f64| f.marchaud(k, r, x).map(f64::abs);
    let mut xs: Vec<f64> = (0..=400).map(|j| lo + (hi - lo) * j as f64 / 400.0).collect();
    for &b in &keys {
        xs.push(b);
        xs.push(b - 1e-9 * width);
    }
    xs.retain(|&x| x >= lo && x <= hi);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let vals: Vec<f64> = xs.iter().map(|&x| eval(x)).collect::<Result<_>>()?;
    let mut best = SupScan { value: 0.0, argmax: lo };
    for (j, (&x, &v)) in xs.iter().zip(&vals).enumerate() {
        if v > best.value {
            best = SupScan { value: v, argmax: x };
        }
        let interior = j > 0 && j + 1 < xs.len();
        if interior && v >= vals[j - 1] && v >= vals[j + 1] && v > 0.5 * best.value {
            let (a, b) = (xs[j - 1], xs[j + 1]);
            let (xm, vm) = crate::funcmodel::golden_argmax(&|t| eval(t).unwrap_or(0.0), a, b);
            if vm > best.value {
                best = SupScan { value: vm, argmax: xm };
            }
        }
    }
    if !best.value.is_finite() {
        return Err(Error::Divergence("D^k f is unbounded".into()));
    }
    Ok(best)
}
