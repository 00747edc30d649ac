//! Signed Stieltjes measures `d Omega` of bounded-variation functions.

use super::piecewise::PiecewiseFunction;
use super::{DomainKind, Func};
use crate::error::{Error, Result};
use crate::quad::{integrate_finite, integrate_semi_infinite, QuadratureSpec};

/// `d Omega` split into point masses and an absolutely continuous density.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesMeasure {
    /// Point masses `(location, mass)`.
    pub jumps: Vec<(f64, f64)>,
    /// Density `Omega'` away from the jumps.
    pub density: PiecewiseFunction,
}

impl StieltjesMeasure {
    /// Measure generated by a piecewise bounded-variation function on the full line.
    pub fn from_bv(omega: &PiecewiseFunction) -> Result<Self> {
        if omega.domain() != DomainKind::FullLine {
            return Err(Error::Domain("a Stieltjes measure needs a full-line Omega".into()));
        }
        let jumps = omega
            .jumps()
            .into_iter()
            .filter(|&(_, j)| j != 0.0)
            .collect();
        Ok(Self {
            jumps,
            density: omega.derivative(),
        })
    }

    /// Total mass `Omega(+inf) - Omega(-inf)`.
    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.jumps.iter().map(|j| j.1).sum::<f64>() + self.density.integral()?)
    }

    /// Total variation `V(Omega)`.
    pub fn total_variation(&self) -> Result<f64> {
        let atoms: f64 = self.jumps.iter().map(|j| j.1.abs()).sum();
        let spec = QuadratureSpec::default();
        let mut cont = 0.0;
        for (i, p) in self.density.pieces().iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let (lo, hi) = self.density.interval(i);
            let g = |t: f64| p.eval(t).abs();
            if lo == f64::NEG_INFINITY {
                return Err(Error::Divergence("density with a non-zero left tail".into()));
            }
            if hi == f64::INFINITY {
                let e = tail_exponent(p)?;
                cont += integrate_semi_infinite(g, lo, -e, &spec)?.value;
                continue;
            }
            let s = match p.min_power_exponent().filter(|&e| e < 0.0 && lo == 0.0) {
                Some(e) => spec.left(e),
                None => spec,
            };
            cont += integrate_finite(g, lo, hi, &s)?.value;
        }
        Ok(atoms + cont)
    }

    /// `int f d Omega`; at atoms `f` takes the mean of its one-sided limits.
    pub fn integrate(&self, f: &Func) -> Result<f64> {
        let mut total = 0.0;
        for &(c, m) in &self.jumps {
            total += m * 0.5 * (f.eval(c) + f.left_limit(c));
        }
        total += self.integrate_density(f)?;
        Ok(total)
    }

    fn integrate_density(&self, f: &Func) -> Result<f64> {
        let d = &self.density;
        let pieces = d.pieces();
        if !pieces[0].is_zero() {
            return Err(Error::Divergence("density with a non-zero left tail".into()));
        }
        let mut points: Vec<f64> = d.breakpoints().to_vec();
        let Some(&first) = points.first() else {
            return Ok(0.0);
        };
        points.extend(f.key_points().into_iter().filter(|&x| x > first));
        points.sort_by(f64::total_cmp);
        points.dedup();
        let spec = QuadratureSpec::default();
        let mut total = 0.0;
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let idx = d.breakpoints().partition_point(|&x| x <= a);
            let p = &pieces[idx];
            if p.is_zero() {
                continue;
            }
            let s = match p.min_power_exponent().filter(|&e| e < 0.0 && a == 0.0) {
                Some(e) => spec.left(e),
                None => spec,
            };
            total += integrate_finite(|t| f.eval(t) * p.eval(t), a, b, &s)?.value;
        }
        let last = *points.last().expect("non-empty");
        let tail = pieces.last().expect("non-empty");
        if !tail.is_zero() {
            let e = tail_exponent(tail)?;
            total += match f.right_constant() {
                Some(c) => {
                    c * tail
                        .powers
                        .iter()
                        .map(|q| -q.coef * last.powf(q.exponent + 1.0) / (q.exponent + 1.0))
                        .sum::<f64>()
                }
                None => integrate_semi_infinite(|t| f.eval(t) * tail.eval(t), last, -e, &spec)?.value,
            };
        }
        Ok(total)
    }
}

fn tail_exponent(p: &super::Piece) -> Result<f64> {
    let e = p.max_power_exponent().unwrap_or(0.0);
    if p.coeffs.iter().any(|&c| c != 0.0) || !(e < -1.0) {
        return Err(Error::Divergence("density tail is not integrable".into()));
    }
    Ok(e)
}
