//! Piecewise functions built from [`Piece`]s.

use serde::{Deserialize, Serialize};

use super::piece::{Piece, PowerTerm};
use super::{DomainKind, NormSpec};
use crate::error::{Error, Result};
use crate::quad::{integrate_finite, integrate_semi_infinite, QuadratureSpec};

/// A function given piece by piece between sorted breakpoints.
///
/// `pieces[i]` is active on `[breakpoints[i-1], breakpoints[i])`. On the
/// full line `pieces[0]` is the left tail `(-inf, breakpoints[0])` and must
/// be constant; on the half-line `pieces[0]` starts at `0`. The last piece is
/// the right tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PiecewiseRepr", into = "PiecewiseRepr")]
pub struct PiecewiseFunction {
    domain: DomainKind,
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
}

#[derive(Serialize, Deserialize)]
struct Tails {
    left: Option<f64>,
    right: Piece,
}

#[derive(Serialize, Deserialize)]
struct PiecewiseRepr {
    domain: DomainKind,
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
    tails: Tails,
}

impl TryFrom<PiecewiseRepr> for PiecewiseFunction {
    type Error = Error;

    fn try_from(repr: PiecewiseRepr) -> Result<Self> {
        let mut pieces = Vec::with_capacity(repr.pieces.len() + 2);
        if repr.domain == DomainKind::FullLine {
            pieces.push(Piece::constant(repr.tails.left.unwrap_or(0.0)));
        } else if repr.tails.left.is_some() {
            return Err(Error::Domain("a half-line function has no left tail".into()));
        }
        pieces.extend(repr.pieces);
        pieces.push(repr.tails.right);
        Self::new(repr.domain, repr.breakpoints, pieces)
    }
}

impl From<PiecewiseFunction> for PiecewiseRepr {
    fn from(f: PiecewiseFunction) -> Self {
        let mut pieces = f.pieces;
        let right = pieces.pop().unwrap_or_else(Piece::zero);
        let left = if f.domain == DomainKind::FullLine {
            let first = pieces.remove(0);
            Some(first.constant_value().unwrap_or(0.0))
        } else {
            None
        };
        Self {
            domain: f.domain,
            breakpoints: f.breakpoints,
            pieces,
            tails: Tails { left, right },
        }
    }
}

impl PiecewiseFunction {
    /// Builds and validates a piecewise function.
    pub fn new(domain: DomainKind, breakpoints: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::Domain(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                pieces.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("breakpoints must be finite and strictly increasing".into()));
        }
        if domain == DomainKind::HalfLine && breakpoints.first().is_some_and(|&b| b <= 0.0) {
            return Err(Error::Domain("half-line breakpoints must be positive".into()));
        }
        let f = Self {
            domain,
            breakpoints,
            pieces,
        };
        if domain == DomainKind::FullLine && !f.pieces[0].is_constant() {
            return Err(Error::Domain("the left tail of a full-line function must be constant".into()));
        }
        for i in 0..f.pieces.len() {
            let p = &f.pieces[i];
            if p.coeffs.iter().any(|c| !c.is_finite())
                || p.powers.iter().any(|q| !(q.coef.is_finite() && q.exponent.is_finite()))
                || !p.origin.is_finite()
            {
                return Err(Error::Domain(format!("piece {i} has non-finite data")));
            }
            if !p.is_polynomial() && f.interval(i).0 < 0.0 {
                return Err(Error::Domain(format!(
                    "piece {i} carries power terms but extends to negative x"
                )));
            }
        }
        Ok(f)
    }

    /// The zero function.
    pub fn zero(domain: DomainKind) -> Self {
        Self {
            domain,
            breakpoints: Vec::new(),
            pieces: vec![Piece::zero()],
        }
    }

    /// Indicator of `[a, b)` on the given domain.
    pub fn indicator(domain: DomainKind, a: f64, b: f64) -> Result<Self> {
        match domain {
            DomainKind::HalfLine if a == 0.0 => {
                Self::new(domain, vec![b], vec![Piece::constant(1.0), Piece::zero()])
            }
            _ => Self::new(
                domain,
                vec![a, b],
                vec![Piece::zero(), Piece::constant(1.0), Piece::zero()],
            ),
        }
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Interval `[lo, hi)` of piece `i`; tails use infinite bounds.
    pub fn interval(&self, i: usize) -> (f64, f64) {
        let lo = if i == 0 {
            match self.domain {
                DomainKind::FullLine => f64::NEG_INFINITY,
                DomainKind::HalfLine => 0.0,
            }
        } else {
            self.breakpoints[i - 1]
        };
        let hi = self.breakpoints.get(i).copied().unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    /// Left end of the domain.
    pub fn domain_start(&self) -> f64 {
        self.interval(0).0
    }

    fn locate(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= x)
    }

    fn locate_left(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b < x)
    }

    /// Value at `x`; at breakpoints the right limit is returned.
    ///
    /// On the half-line the value at negative `x` is `f(0)`.
    pub fn eval(&self, x: f64) -> f64 {
        let x = self.clamp(x);
        self.pieces[self.locate(x)].eval(x)
    }

    /// Left limit at `x`.
    pub fn left_limit(&self, x: f64) -> f64 {
        if self.domain == DomainKind::HalfLine && x <= 0.0 {
            return self.eval(0.0);
        }
        self.pieces[self.locate_left(x)].eval(x)
    }

    fn clamp(&self, x: f64) -> f64 {
        match self.domain {
            DomainKind::HalfLine if x < 0.0 => 0.0,
            _ => x,
        }
    }

    /// Jumps `f(b+) - f(b-)` at every breakpoint.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, self.pieces[i + 1].eval(b) - self.pieces[i].eval(b)))
            .collect()
    }

    /// Largest absolute jump relative to the local scale.
    pub fn max_relative_jump(&self) -> f64 {
        self.jumps()
            .iter()
            .zip(self.breakpoints.iter().enumerate())
            .map(|(&(_, j), (i, &b))| {
                let scale = self.pieces[i].eval(b).abs().max(self.pieces[i + 1].eval(b).abs()).max(1.0);
                j.abs() / scale
            })
            .fold(0.0, f64::max)
    }

    /// Value of the right tail when it is constant.
    pub fn right_constant(&self) -> Option<f64> {
        self.pieces.last().and_then(Piece::constant_value)
    }

    /// Value of the left tail (full line) or `f(0)` (half-line).
    pub fn left_value(&self) -> f64 {
        match self.domain {
            DomainKind::FullLine => self.pieces[0].constant_value().unwrap_or(0.0),
            DomainKind::HalfLine => self.eval(0.0),
        }
    }

    /// Piecewise derivative; jumps are discarded.
    pub fn derivative(&self) -> Self {
        Self {
            domain: self.domain,
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(Piece::derivative).collect(),
        }
    }

    /// `n`-th piecewise derivative.
    pub fn derivative_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |f, _| f.derivative())
    }

    /// Continuous antiderivative `F(x) = int_{start}^x f`.
    ///
    /// On the full line the left tail of `f` must vanish.
    pub fn antiderivative(&self) -> Result<Self> {
        if self.domain == DomainKind::FullLine && !self.pieces[0].is_zero() {
            return Err(Error::Divergence(
                "antiderivative of a function with a non-zero left tail".into(),
            ));
        }
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut running = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            let (lo, hi) = self.interval(i);
            if lo == f64::NEG_INFINITY {
                pieces.push(Piece::zero());
                continue;
            }
            let mut a = p.antiderivative()?;
            let at_lo = a.eval(lo);
            if !at_lo.is_finite() {
                return Err(Error::Divergence(format!(
                    "antiderivative is unbounded at {lo}"
                )));
            }
            if a.coeffs.is_empty() {
                a.coeffs.push(0.0);
            }
            a.coeffs[0] += running - at_lo;
            if hi.is_finite() {
                running = a.eval(hi);
            }
            pieces.push(a);
        }
        Ok(Self {
            domain: self.domain,
            breakpoints: self.breakpoints.clone(),
            pieces,
        })
    }

    /// Repeated integral `f^[m]`; `m = 0` returns a copy.
    pub fn repeated_integral(&self, m: usize) -> Result<Self> {
        let mut f = self.clone();
        for _ in 0..m {
            f = f.antiderivative()?;
        }
        Ok(f)
    }

    /// `c * f`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            domain: self.domain,
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scaled(c)).collect(),
        }
    }

    /// `amplitude * f(x / h)` for `h > 0`.
    pub fn dilated(&self, h: f64, amplitude: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(format!("dilation factor must be positive, got {h}")));
        }
        Ok(Self {
            domain: self.domain,
            breakpoints: self.breakpoints.iter().map(|b| b * h).collect(),
            pieces: self.pieces.iter().map(|p| p.dilated(h, amplitude)).collect(),
        })
    }

    /// Translation `f(x - c)`; power terms are not translatable.
    pub fn translated(&self, c: f64) -> Result<Self> {
        if self.domain != DomainKind::FullLine {
            return Err(Error::Unsupported("translation of a half-line function".into()));
        }
        if self.pieces.iter().any(|p| !p.is_polynomial()) {
            return Err(Error::Unsupported("translation of power terms".into()));
        }
        Ok(Self {
            domain: self.domain,
            breakpoints: self.breakpoints.iter().map(|b| b + c).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece::poly(p.origin + c, p.coeffs.clone()))
                .collect(),
        })
    }

    /// Re-splits the function so that every point of `extra` is a breakpoint.
    pub fn refined(&self, extra: &[f64]) -> Self {
        let start = self.domain_start();
        let mut bps: Vec<f64> = self
            .breakpoints
            .iter()
            .copied()
            .chain(extra.iter().copied().filter(|&x| x.is_finite() && x > start))
            .collect();
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        let mut pieces = Vec::with_capacity(bps.len() + 1);
        pieces.push(self.pieces[0].clone());
        for &b in &bps {
            pieces.push(self.pieces[self.locate(b)].clone());
        }
        Self {
            domain: self.domain,
            breakpoints: bps,
            pieces,
        }
    }

    /// Pointwise sum; the domains must agree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::Domain("cannot add functions on different domains".into()));
        }
        let a = self.refined(&other.breakpoints);
        let b = other.refined(&self.breakpoints);
        let pieces = a.pieces.iter().zip(&b.pieces).map(|(p, q)| p.add(q)).collect();
        Ok(Self {
            domain: self.domain,
            breakpoints: a.breakpoints,
            pieces,
        })
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    /// Steklov average `S_h f(x) = (1/h) int_x^{x+h} f`.
    pub fn steklov_average(&self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(format!("Steklov step must be positive, got {h}")));
        }
        if self.domain != DomainKind::FullLine {
            return Err(Error::Unsupported("Steklov averaging on the half-line".into()));
        }
        let left = self.left_value();
        let centred = self.sub(&Self::constant(DomainKind::FullLine, left))?;
        let big = centred.antiderivative()?;
        let shifted = big.translated(-h)?;
        let avg = shifted.sub(&big)?.scaled(1.0 / h);
        avg.add(&Self::constant(DomainKind::FullLine, left))
    }

    /// Constant function.
    pub fn constant(domain: DomainKind, c: f64) -> Self {
        Self {
            domain,
            breakpoints: Vec::new(),
            pieces: vec![Piece::constant(c)],
        }
    }

    /// Essential supremum of `|f|` over the domain.
    pub fn sup_norm(&self) -> Result<f64> {
        let mut best = 0.0_f64;
        for i in 0..self.pieces.len() {
            best = best.max(self.piece_sup(i)?);
        }
        Ok(best)
    }

    fn piece_sup(&self, i: usize) -> Result<f64> {
        let p = &self.pieces[i];
        let (lo, hi) = self.interval(i);
        if let Some(c) = p.constant_value() {
            return Ok(c.abs());
        }
        if hi == f64::INFINITY {
            if !p.coeffs.iter().skip(1).all(|&c| c == 0.0) || p.max_power_exponent().is_some_and(|e| e > 0.0) {
                return Err(Error::Divergence("unbounded right tail".into()));
            }
            let start = lo.max(1e-300);
            let mut best = p.coeffs.first().copied().unwrap_or(0.0).abs();
            let mut prev = start;
            for j in 0..=60 {
                let x = start * 2f64.powi(j);
                best = best.max(sup_on(|t| p.eval(t).abs(), prev, x)?);
                prev = x;
            }
            return Ok(best);
        }
        sup_on(|t| p.eval(t).abs(), lo, hi)
    }

    /// `L_p` norm over the domain.
    pub fn lp_norm(&self, p: NormSpec) -> Result<f64> {
        let p = match p {
            NormSpec::Infinite => return self.sup_norm(),
            NormSpec::Finite(p) => p,
        };
        let spec = QuadratureSpec::default();
        let mut total = 0.0;
        for (i, piece) in self.pieces.iter().enumerate() {
            if piece.is_zero() {
                continue;
            }
            let (lo, hi) = self.interval(i);
            let g = |t: f64| piece.eval(t).abs().powf(p);
            if lo == f64::NEG_INFINITY {
                return Err(Error::Divergence("non-zero left tail has infinite L_p norm".into()));
            }
            if hi == f64::INFINITY {
                let poly_zero = piece.coeffs.iter().all(|&c| c == 0.0);
                let e = piece.max_power_exponent().unwrap_or(0.0);
                if !poly_zero || !(e * p < -1.0) {
                    return Err(Error::Divergence("right tail has infinite L_p norm".into()));
                }
                total += integrate_semi_infinite(g, lo, -e * p, &spec)?.value;
                continue;
            }
            let mut s = spec;
            if lo == 0.0 {
                if let Some(e) = piece.min_power_exponent().filter(|&e| e < 0.0) {
                    s = s.left(e * p);
                }
            }
            total += integrate_finite(g, lo, hi, &s)?.value;
        }
        Ok(total.powf(1.0 / p))
    }

    /// Replaces a polynomial right tail whose non-constant coefficients are
    /// below `tol` (relative to the function scale) by its constant part.
    pub fn with_constant_tail(mut self, tol: f64) -> Result<Self> {
        let start = self.breakpoints.last().copied().unwrap_or(0.0);
        let scale = self.pieces.iter().map(|p| p.eval(start).abs()).fold(1.0, f64::max);
        let last = self.pieces.last_mut().expect("non-empty");
        if !last.powers.is_empty() {
            return Err(Error::Divergence("right tail carries power terms".into()));
        }
        if last.coeffs.iter().skip(1).any(|c| c.abs() > tol * scale) {
            return Err(Error::Divergence("right tail is not constant".into()));
        }
        let c = last.eval(start);
        *last = Piece::constant(c);
        Ok(self)
    }

    /// `int f` over the domain.
    pub fn integral(&self) -> Result<f64> {
        let big = self.antiderivative()?;
        let last = big.pieces.last().expect("non-empty");
        if !last.coeffs.iter().skip(1).all(|&c| c == 0.0) || last.max_power_exponent().is_some_and(|e| e > 0.0) {
            return Err(Error::Divergence("integral over an unbounded tail".into()));
        }
        Ok(last.coeffs.first().copied().unwrap_or(0.0))
    }
}

/// Supremum of a continuous function on `[lo, hi]` by dense sampling and
/// golden-section refinement around the best samples.
pub(crate) fn sup_on<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    const N: usize = 96;
    let vals: Vec<(f64, f64)> = (0..=N)
        .map(|j| {
            let x = lo + (hi - lo) * j as f64 / N as f64;
            (x, f(x))
        })
        .collect();
    if vals.iter().any(|(_, v)| v.is_infinite()) {
        return Err(Error::Divergence(format!("unbounded on [{lo}, {hi}]")));
    }
    let mut best = vals.iter().map(|v| v.1).fold(0.0, f64::max);
    for j in 1..N {
        if vals[j].1 >= vals[j - 1].1 && vals[j].1 >= vals[j + 1].1 {
            best = best.max(golden_max(&f, vals[j - 1].0, vals[j + 1].0));
        }
    }
    Ok(best)
}

pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    golden_argmax(f, a, b).1
}

/// Golden-section search for a local maximiser of `f` in `[a, b]`.
pub(crate) fn golden_argmax<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Power term helper used by the catalog.
pub fn power(coef: f64, exponent: f64) -> PowerTerm {
    PowerTerm::new(coef, exponent)
}
