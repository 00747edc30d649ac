//! A single piece: a polynomial in local coordinates plus power terms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Algebraic term `coef * x^exponent`, defined for `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coef: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn new(coef: f64, exponent: f64) -> Self {
        Self { coef, exponent }
    }

    fn eval(&self, x: f64) -> f64 {
        if self.coef == 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            return if self.exponent > 0.0 {
                0.0
            } else if self.exponent == 0.0 {
                self.coef
            } else {
                self.coef.signum() * f64::INFINITY
            };
        }
        self.coef * x.powf(self.exponent)
    }
}

/// `sum_j coeffs[j] (x - origin)^j + sum powers`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub origin: f64,
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub powers: Vec<PowerTerm>,
}

impl Piece {
    /// Polynomial piece with the given local coefficients.
    pub fn poly(origin: f64, coeffs: Vec<f64>) -> Self {
        Self {
            origin,
            coeffs,
            powers: Vec::new(),
        }
    }

    /// Constant piece.
    pub fn constant(c: f64) -> Self {
        Self::poly(0.0, vec![c])
    }

    /// Zero piece.
    pub fn zero() -> Self {
        Self::poly(0.0, Vec::new())
    }

    /// Adds power terms.
    pub fn with_powers(mut self, powers: Vec<PowerTerm>) -> Self {
        self.powers.extend(powers.into_iter().filter(|p| p.coef != 0.0));
        self
    }

    /// Evaluates the piece at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x - self.origin) + self.powers.iter().map(|p| p.eval(x)).sum::<f64>()
    }

    /// True when there are no power terms.
    pub fn is_polynomial(&self) -> bool {
        self.powers.iter().all(|p| p.coef == 0.0)
    }

    /// True for a polynomial piece of degree at most zero.
    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.coeffs.iter().skip(1).all(|&c| c == 0.0)
    }

    /// True when the piece vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.is_polynomial() && self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Value of the constant term when the piece is constant.
    pub fn constant_value(&self) -> Option<f64> {
        self.is_constant()
            .then(|| self.coeffs.first().copied().unwrap_or(0.0))
    }

    /// Smallest exponent among non-vanishing power terms.
    pub fn min_power_exponent(&self) -> Option<f64> {
        self.powers
            .iter()
            .filter(|p| p.coef != 0.0)
            .map(|p| p.exponent)
            .reduce(f64::min)
    }

    /// Largest exponent among non-vanishing power terms.
    pub fn max_power_exponent(&self) -> Option<f64> {
        self.powers
            .iter()
            .filter(|p| p.coef != 0.0)
            .map(|p| p.exponent)
            .reduce(f64::max)
    }

    /// Exact derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| c * j as f64)
            .collect();
        let powers = self
            .powers
            .iter()
            .filter(|p| p.exponent != 0.0 && p.coef != 0.0)
            .map(|p| PowerTerm::new(p.coef * p.exponent, p.exponent - 1.0))
            .collect();
        Self {
            origin: self.origin,
            coeffs,
            powers,
        }
    }

    /// Antiderivative that vanishes at the origin for the polynomial part.
    pub fn antiderivative(&self) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(j, &c)| c / (j + 1) as f64));
        let mut powers = Vec::with_capacity(self.powers.len());
        for p in self.powers.iter().filter(|p| p.coef != 0.0) {
            if p.exponent == -1.0 {
                return Err(Error::Unsupported(
                    "antiderivative of x^-1 (logarithm) is not representable".into(),
                ));
            }
            powers.push(PowerTerm::new(p.coef / (p.exponent + 1.0), p.exponent + 1.0));
        }
        Ok(Self {
            origin: self.origin,
            coeffs,
            powers,
        })
    }

    /// Re-expands the polynomial part around a new origin.
    pub fn shifted(&self, new_origin: f64) -> Self {
        Self {
            origin: new_origin,
            coeffs: taylor_shift(&self.coeffs, new_origin - self.origin),
            powers: self.powers.clone(),
        }
    }

    /// Multiplies the piece by a constant.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            origin: self.origin,
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
            powers: self
                .powers
                .iter()
                .map(|p| PowerTerm::new(p.coef * c, p.exponent))
                .collect(),
        }
    }

    /// `amplitude * piece(x / h)`.
    pub fn dilated(&self, h: f64, amplitude: f64) -> Self {
        let mut scale = amplitude;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * scale;
                scale /= h;
                v
            })
            .collect();
        let powers = self
            .powers
            .iter()
            .map(|p| PowerTerm::new(amplitude * p.coef * h.powf(-p.exponent), p.exponent))
            .collect();
        Self {
            origin: self.origin * h,
            coeffs,
            powers,
        }
    }

    /// Sum of two pieces, expressed around `self.origin`.
    pub fn add(&self, other: &Self) -> Self {
        let other = other.shifted(self.origin);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|j| self.coeffs.get(j).copied().unwrap_or(0.0) + other.coeffs.get(j).copied().unwrap_or(0.0))
            .collect();
        let mut powers = self.powers.clone();
        for p in &other.powers {
            match powers.iter_mut().find(|q| q.exponent == p.exponent) {
                Some(q) => q.coef += p.coef,
                None => powers.push(*p),
            }
        }
        powers.retain(|p| p.coef != 0.0);
        Self {
            origin: self.origin,
            coeffs,
            powers,
        }
    }
}

/// Horner evaluation of `sum c[j] u^j`.
pub fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// Coefficients of `p(v + d)` in powers of `v`, given those of `p(u)`.
pub fn taylor_shift(coeffs: &[f64], d: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    if d == 0.0 {
        return c;
    }
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            c[j] += d * c[j + 1];
        }
    }
    c
}
