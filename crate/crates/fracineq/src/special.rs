//! Special functions and kernels: Gamma, the Marchaud normalising constant
//! `kappa(k, n)`, cardinal B-splines `N_r`, the power kernel `R_tau` and
//! repeated integration `f^[m]`.

use crate::error::{Error, Result};
use crate::funcmodel::PiecewiseFunction;

/// Fractional order `k` together with the integer smoothness `r`.
///
/// The pair is admissible when `0 < k < r` and `k` is not an integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    k: f64,
    r: usize,
}

impl FracOrder {
    /// Validates and builds an order.
    pub fn new(k: f64, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain("r must be at least 1".into()));
        }
        if !k.is_finite() || k <= 0.0 || k >= r as f64 {
            return Err(Error::Domain(format!("k must lie in (0, {r}), got {k}")));
        }
        if k.fract() == 0.0 {
            return Err(Error::Domain(format!("k must not be an integer, got {k}")));
        }
        Ok(Self { k, r })
    }

    /// The fractional order.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// The smoothness index.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Default number of differences `n = floor(k) + 1` for the Marchaud definition.
    pub fn default_n(&self) -> usize {
        self.k.floor() as usize + 1
    }
}

/// Euler's Gamma function.
///
/// Delegates to the `libm` port of the musl Lanczos implementation, which
/// handles negative arguments through the reflection formula.
pub fn gamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x.fract() == 0.0 {
        return Err(Error::Pole(x));
    }
    Ok(libm::tgamma(x))
}

/// Binomial coefficient as a float.
pub fn binomial(n: usize, m: usize) -> f64 {
    if m > n {
        return 0.0;
    }
    let m = m.min(n - m);
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Integer alternating moments `sum_m (-1)^m C(n, m) m^j`, exact for small `n`.
pub(crate) fn difference_moment(n: usize, j: usize) -> f64 {
    let mut acc: i128 = 0;
    let mut c: i128 = 1;
    for m in 0..=n {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let pow = if j == 0 { 1 } else { (m as i128).pow(j as u32) };
        acc += sign * c * pow;
        c = c * (n - m) as i128 / (m as i128 + 1);
    }
    acc as f64
}

/// Normalising constant `kappa(k, n) = Gamma(-k) sum_{m=0}^n (-1)^m C(n, m) m^k`
/// with the convention `0^k = 0`.
pub fn kappa(k: f64, n: usize) -> Result<f64> {
    if n == 0 || !(k > 0.0 && k < n as f64) || k.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "kappa needs k in (0, n) without integers, got k = {k}, n = {n}"
        )));
    }
    let sum: f64 = (1..=n)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, m) * (m as f64).powf(k)
        })
        .sum();
    Ok(gamma(-k)? * sum)
}

/// Cardinal B-spline `N_r` supported on `[0, r]`, computed by the
/// Cox-de Boor recursion `N_r(x) = (x N_{r-1}(x) + (r - x) N_{r-1}(x - 1)) / (r - 1)`.
pub fn bspline(r: usize, x: f64) -> f64 {
    if r == 0 {
        return 0.0;
    }
    if x <= 0.0 || x >= r as f64 {
        return if r == 1 && x == 0.0 { 1.0 } else { 0.0 };
    }
    // Values of N_1(x - j) for the integer shifts that touch x.
    let mut level: Vec<f64> = (0..r).map(|j| bspline_order1(x - j as f64)).collect();
    for order in 2..=r {
        let denom = (order - 1) as f64;
        let next: Vec<f64> = (0..=r - order)
            .map(|j| {
                let y = x - j as f64;
                (y * level[j] + (order as f64 - y) * level[j + 1]) / denom
            })
            .collect();
        level = next;
    }
    level[0]
}

fn bspline_order1(x: f64) -> f64 {
    if (0.0..1.0).contains(&x) {
        1.0
    } else {
        0.0
    }
}

/// Power kernel `R_tau(x) = x^(tau - 1) / Gamma(tau)` for `x > 0` and `0` otherwise.
pub fn kernel_r(tau: f64, x: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    Ok(x.powf(tau - 1.0) / gamma(tau)?)
}

/// Repeated integral `f^[m](x) = 1/(m-1)! int (x - t)_+^(m-1) f(t) dt`.
///
/// `m = 0` returns `f` unchanged.
pub fn repeated_integral(f: &PiecewiseFunction, m: usize) -> Result<PiecewiseFunction> {
    f.repeated_integral(m)
}
