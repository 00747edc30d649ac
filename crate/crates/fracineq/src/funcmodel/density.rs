//! Functions given as an `r`-fold integral of a compactly supported density.

use std::fmt;
use std::sync::Arc;

use super::piecewise::sup_on;
use super::{DomainKind, NormSpec};
use crate::error::{Error, Result};
use crate::quad::{integrate_finite, QuadratureSpec};
use crate::special::{binomial, gamma};

/// Shared density closure.
pub type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `amp * Phi(x / h)` where `Phi^(r) = g` on `[L, R]`, `g = 0` elsewhere, and
/// `Phi^(j)(L)` is prescribed for `j < r`.
#[derive(Clone)]
pub struct IntegratedDensity {
    domain: DomainKind,
    order: usize,
    nodes: Vec<f64>,
    exponents: Vec<(Option<f64>, Option<f64>)>,
    base: Vec<f64>,
    g: Density,
    moments: Vec<Vec<f64>>,
    end_derivs: Vec<f64>,
    spec: QuadratureSpec,
    h: f64,
    amp: f64,
}

impl fmt::Debug for IntegratedDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegratedDensity")
            .field("domain", &self.domain)
            .field("order", &self.order)
            .field("nodes", &self.nodes)
            .field("base", &self.base)
            .field("h", &self.h)
            .field("amp", &self.amp)
            .finish()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|j| j as f64).product()
}

impl IntegratedDensity {
    /// Builds the function.
    ///
    /// `nodes` are sorted points `L = nodes[0] < ... < nodes[m] = R` at which
    /// `g` may be singular; `exponents[i]` declares the behaviour of `g` at the
    /// ends of panel `[nodes[i], nodes[i+1]]`. `base[j] = Phi^(j)(L)`.
    pub fn new(
        domain: DomainKind,
        order: usize,
        nodes: Vec<f64>,
        exponents: Vec<(Option<f64>, Option<f64>)>,
        base: Vec<f64>,
        g: Density,
        tol: f64,
    ) -> Result<Self> {
        if order == 0 || base.len() != order {
            return Err(Error::Domain("order must be positive and match the base values".into()));
        }
        if nodes.len() < 2 || nodes.windows(2).any(|w| !(w[0] < w[1])) || exponents.len() + 1 != nodes.len() {
            return Err(Error::Domain("nodes must increase and match the panel exponents".into()));
        }
        if domain == DomainKind::HalfLine && nodes[0] != 0.0 {
            return Err(Error::Domain("a half-line density must start at 0".into()));
        }
        let spec = QuadratureSpec::with_tol(tol);
        let lo = nodes[0];
        let mut moments = vec![vec![0.0; order]];
        for (i, w) in nodes.windows(2).enumerate() {
            let (l, r) = exponents[i];
            let s = QuadratureSpec {
                left_exponent: l,
                right_exponent: r,
                ..spec
            };
            let prev = moments.last().expect("non-empty").clone();
            let mut next = prev;
            for (j, m) in next.iter_mut().enumerate() {
                *m += integrate_finite(|t| (t - lo).powi(j as i32) * g(t), w[0], w[1], &s)?.value;
            }
            moments.push(next);
        }
        let mut f = Self {
            domain,
            order,
            nodes,
            exponents,
            base,
            g,
            moments,
            end_derivs: Vec::new(),
            spec,
            h: 1.0,
            amp: 1.0,
        };
        let end = *f.nodes.last().expect("non-empty");
        let last = f.moments.last().expect("non-empty").clone();
        f.end_derivs = (0..order).map(|j| f.combine(j, end, &last)).collect();
        Ok(f)
    }

    /// Assembles `Phi^(j)(x)` from moments `int_L^x (t - L)^i g`.
    fn combine(&self, j: usize, x: f64, m: &[f64]) -> f64 {
        let lo = self.nodes[0];
        let u = x - lo;
        let r = self.order;
        let mut v = 0.0;
        for i in j..r {
            v += self.base[i] * u.powi((i - j) as i32) / factorial(i - j);
        }
        let d = r - 1 - j;
        let mut conv = 0.0;
        for i in 0..=d {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            conv += binomial(d, i) * u.powi((d - i) as i32) * sign * m[i];
        }
        v + conv / factorial(d)
    }

    fn moments_at(&self, x: f64) -> Result<Vec<f64>> {
        let lo = self.nodes[0];
        let j = self.nodes.partition_point(|&n| n <= x) - 1;
        let (a, b) = (self.nodes[j], self.nodes[j + 1]);
        let (el, er) = self.exponents[j];
        let g = &self.g;
        let mut out = Vec::with_capacity(self.order);
        for i in 0..self.order {
            let f = |t: f64| (t - lo).powi(i as i32) * g(t);
            let v = if x - a <= b - x {
                let s = QuadratureSpec {
                    left_exponent: el,
                    right_exponent: None,
                    ..self.spec
                };
                self.moments[j][i] + integrate_finite(f, a, x, &s)?.value
            } else {
                let s = QuadratureSpec {
                    left_exponent: None,
                    right_exponent: er,
                    ..self.spec
                };
                self.moments[j + 1][i] - integrate_finite(f, x, b, &s)?.value
            };
            out.push(v);
        }
        Ok(out)
    }

    /// Unscaled `Phi^(j)(x)` for `j <= r`.
    fn raw_derivative(&self, j: usize, x: f64) -> Result<f64> {
        let (lo, hi) = (self.nodes[0], *self.nodes.last().expect("non-empty"));
        let x = if self.domain == DomainKind::HalfLine { x.max(0.0) } else { x };
        if j == self.order {
            return Ok(if x < lo || x > hi { 0.0 } else { (self.g)(x) });
        }
        if x <= lo {
            let u = x - lo;
            return Ok((j..self.order)
                .map(|i| self.base[i] * u.powi((i - j) as i32) / factorial(i - j))
                .sum());
        }
        if x >= hi {
            let u = x - hi;
            return Ok((j..self.order)
                .map(|i| self.end_derivs[i] * u.powi((i - j) as i32) / factorial(i - j))
                .sum());
        }
        let m = self.moments_at(x)?;
        Ok(self.combine(j, x, &m))
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `Phi^(j)(x)` of the scaled function.
    pub fn derivative_at(&self, j: usize, x: f64) -> Result<f64> {
        Ok(self.amp * self.h.powi(-(j as i32)) * self.raw_derivative(j, x / self.h)?)
    }

    /// Value at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.derivative_at(0, x).unwrap_or(f64::NAN)
    }

    /// Support of the density after scaling.
    pub fn support(&self) -> (f64, f64) {
        (self.nodes[0] * self.h, self.nodes.last().expect("non-empty") * self.h)
    }

    /// Scaled nodes.
    pub fn key_points(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n * self.h).collect()
    }

    /// Value on the right tail when all higher derivatives vanish there.
    pub fn right_constant(&self) -> Option<f64> {
        let scale = self.end_derivs.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        self.end_derivs[1..]
            .iter()
            .all(|d| d.abs() <= 1e-7 * scale)
            .then(|| self.amp * self.end_derivs[0])
    }

    /// `amp * Phi(x / h)` applied on top of the current scaling.
    pub fn dilated(&self, h: f64, amplitude: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(format!("dilation factor must be positive, got {h}")));
        }
        let mut out = self.clone();
        out.h *= h;
        out.amp *= amplitude;
        Ok(out)
    }

    /// Supremum of `|Phi|`.
    pub fn sup_norm(&self) -> Result<f64> {
        let left_ok = self.domain == DomainKind::HalfLine || self.base[1..].iter().all(|&b| b == 0.0);
        if !left_ok || self.right_constant().is_none() {
            return Err(Error::Divergence("integrated density is unbounded".into()));
        }
        let mut best = self.base[0].abs().max(self.end_derivs[0].abs());
        for w in self.nodes.windows(2) {
            best = best.max(sup_on(
                |t| self.raw_derivative(0, t).map_or(f64::NAN, f64::abs),
                w[0],
                w[1],
            )?);
        }
        Ok(self.amp.abs() * best)
    }

    /// `||Phi^(r)||_s` of the scaled function.
    pub fn top_derivative_norm(&self, s: NormSpec) -> Result<f64> {
        let r = self.order as i32;
        let factor = self.amp.abs() * self.h.powi(-r);
        match s {
            NormSpec::Infinite => {
                let mut best = 0.0_f64;
                for w in self.nodes.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let pad = 1e-9 * (b - a);
                    best = best.max(sup_on(|t| (self.g)(t).abs(), a + pad, b - pad)?);
                }
                Ok(factor * best)
            }
            NormSpec::Finite(p) => {
                let mut total = 0.0;
                for (i, w) in self.nodes.windows(2).enumerate() {
                    let (l, r) = self.exponents[i];
                    let s = QuadratureSpec {
                        left_exponent: l.map(|e| e * p),
                        right_exponent: r.map(|e| e * p),
                        ..self.spec
                    };
                    total += integrate_finite(|t| (self.g)(t).abs().powf(p), w[0], w[1], &s)?.value;
                }
                Ok(factor * self.h.powf(1.0 / p) * total.powf(1.0 / p))
            }
        }
    }

    /// `D^k Phi(x)` through the derivative representation.
    pub fn marchaud(&self, k: f64, x: f64) -> Result<f64> {
        let raw = self.raw_marchaud(k, x / self.h)?;
        Ok(self.amp * self.h.powf(-k) * raw)
    }

    fn raw_marchaud(&self, k: f64, x: f64) -> Result<f64> {
        let r = self.order;
        if !(k > 0.0 && k < r as f64) {
            return Err(Error::Domain(format!("order k = {k} must lie in (0, {r})")));
        }
        let beta = r as f64 - 1.0 - k;
        let hi = *self.nodes.last().expect("non-empty");
        if x >= hi {
            return Ok(0.0);
        }
        let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
        let g = &self.g;
        let f = |y: f64| (y - x).powf(beta) * g(y);
        let mut total = 0.0;
        for (i, w) in self.nodes.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            if b <= x {
                continue;
            }
            let (mut el, er) = self.exponents[i];
            let start = a.max(x);
            if start == x {
                let ge = if a == x { el.unwrap_or(0.0) } else { 0.0 };
                el = Some(beta + ge);
            }
            let s = QuadratureSpec {
                left_exponent: el,
                right_exponent: er,
                ..self.spec
            };
            total += integrate_finite(f, start, b, &s)?.value;
        }
        Ok(sign * total / gamma(r as f64 - k)?)
    }
}
