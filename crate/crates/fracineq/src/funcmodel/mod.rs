//! Function model: piecewise functions with power terms, Stieltjes measures
//! of bounded-variation functions, functions given by an integrated density,
//! and the common [`Func`] interface used by the rest of the crate.

mod density;
mod measure;
mod piece;
mod piecewise;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use density::{Density, IntegratedDensity};
pub use measure::StieltjesMeasure;
pub use piece::{horner, taylor_shift, Piece, PowerTerm};
pub use piecewise::{power, PiecewiseFunction};
pub(crate) use piecewise::{golden_argmax, sup_on};

use crate::error::{Error, Result};

/// Domain of the functions: the half-line `[0, inf)` or the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainKind {
    #[serde(rename = "half")]
    HalfLine,
    #[serde(rename = "full")]
    FullLine,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::HalfLine => "half",
            Self::FullLine => "full",
        })
    }
}

impl FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "half" | "halfline" | "half-line" | "r+" => Ok(Self::HalfLine),
            "full" | "fullline" | "full-line" | "line" | "r" => Ok(Self::FullLine),
            other => Err(Error::Domain(format!("unknown domain '{other}', expected half or full"))),
        }
    }
}

/// Lebesgue exponent `p` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExponentRepr", into = "ExponentRepr")]
pub enum NormSpec {
    Finite(f64),
    Infinite,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExponentRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<ExponentRepr> for NormSpec {
    type Error = Error;

    fn try_from(r: ExponentRepr) -> Result<Self> {
        match r {
            ExponentRepr::Number(p) => Self::new(p),
            ExponentRepr::Text(s) => s.parse(),
        }
    }
}

impl From<NormSpec> for ExponentRepr {
    fn from(p: NormSpec) -> Self {
        match p {
            NormSpec::Finite(v) => Self::Number(v),
            NormSpec::Infinite => Self::Text("inf".into()),
        }
    }
}

impl NormSpec {
    /// Validates `p >= 1`; `f64::INFINITY` maps to [`NormSpec::Infinite`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::Infinite)
        } else if p >= 1.0 && p.is_finite() {
            Ok(Self::Finite(p))
        } else {
            Err(Error::Domain(format!("exponent must lie in [1, inf], got {p}")))
        }
    }

    /// Numeric value, `inf` for [`NormSpec::Infinite`].
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinite => f64::INFINITY,
        }
    }

    /// `1/p` with `1/inf = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinite => 0.0,
        }
    }

    /// Conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Self {
        match self {
            Self::Infinite => Self::Finite(1.0),
            Self::Finite(p) if p == 1.0 => Self::Infinite,
            Self::Finite(p) => Self::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "\u{221e}" => Ok(Self::Infinite),
            t => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| Error::Domain(format!("cannot parse exponent '{s}'")))?;
                Self::new(p)
            }
        }
    }
}

/// A function of the model: exact piecewise data or an integrated density.
#[derive(Debug, Clone)]
pub enum Func {
    Piecewise(PiecewiseFunction),
    Integrated(IntegratedDensity),
}

impl From<PiecewiseFunction> for Func {
    fn from(f: PiecewiseFunction) -> Self {
        Self::Piecewise(f)
    }
}

impl From<IntegratedDensity> for Func {
    fn from(f: IntegratedDensity) -> Self {
        Self::Integrated(f)
    }
}

impl Func {
    pub fn domain(&self) -> DomainKind {
        match self {
            Self::Piecewise(f) => f.domain(),
            Self::Integrated(f) => f.domain(),
        }
    }

    /// Value at `x` (right limit at breakpoints).
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Piecewise(f) => f.eval(x),
            Self::Integrated(f) => f.eval(x),
        }
    }

    /// Left limit at `x`.
    pub fn left_limit(&self, x: f64) -> f64 {
        match self {
            Self::Piecewise(f) => f.left_limit(x),
            Self::Integrated(f) => f.eval(x),
        }
    }

    /// Points where the function may fail to be smooth.
    pub fn key_points(&self) -> Vec<f64> {
        match self {
            Self::Piecewise(f) => f.breakpoints().to_vec(),
            Self::Integrated(f) => f.key_points(),
        }
    }

    /// Value beyond the last key point when the function is constant there.
    pub fn right_constant(&self) -> Option<f64> {
        match self {
            Self::Piecewise(f) => f.right_constant(),
            Self::Integrated(f) => f.right_constant(),
        }
    }

    /// `||f||_inf`.
    pub fn sup_norm(&self) -> Result<f64> {
        match self {
            Self::Piecewise(f) => f.sup_norm(),
            Self::Integrated(f) => f.sup_norm(),
        }
    }

    /// `||f||_p`.
    pub fn norm(&self, p: NormSpec) -> Result<f64> {
        match (self, p) {
            (_, NormSpec::Infinite) => self.sup_norm(),
            (Self::Piecewise(f), _) => f.lp_norm(p),
            (Self::Integrated(_), _) => Err(Error::Unsupported(
                "finite L_p norms of integrated densities".into(),
            )),
        }
    }

    /// `||f^(r)||_s`; for `s = 1` jumps of `f^(r-1)` count as point masses.
    pub fn derivative_norm(&self, r: usize, s: NormSpec) -> Result<f64> {
        match self {
            Self::Integrated(f) if f.order() == r => f.top_derivative_norm(s),
            Self::Integrated(f) => Err(Error::Unsupported(format!(
                "density of order {} cannot give the derivative of order {r}",
                f.order()
            ))),
            Self::Piecewise(f) => piecewise_derivative_norm(f, r, s),
        }
    }

    /// `D^k f(x)` through the derivative representation of order `r`.
    pub fn marchaud(&self, k: f64, r: usize, x: f64) -> Result<f64> {
        match self {
            Self::Piecewise(f) => crate::marchaud::by_representation(f, k, r, x),
            Self::Integrated(f) if f.order() == r => f.marchaud(k, x),
            Self::Integrated(f) => Err(Error::Unsupported(format!(
                "density of order {} used with r = {r}",
                f.order()
            ))),
        }
    }

    /// `amplitude * f(x / h)`.
    pub fn dilated(&self, h: f64, amplitude: f64) -> Result<Self> {
        Ok(match self {
            Self::Piecewise(f) => Self::Piecewise(f.dilated(h, amplitude)?),
            Self::Integrated(f) => Self::Integrated(f.dilated(h, amplitude)?),
        })
    }
}

fn piecewise_derivative_norm(f: &PiecewiseFunction, r: usize, s: NormSpec) -> Result<f64> {
    let mut current = f.clone();
    let mut atoms = 0.0;
    for j in 0..r {
        let scale = current.sup_norm().unwrap_or(1.0).max(1.0);
        let jumps = current.jumps();
        let has_jump = jumps.iter().any(|&(_, v)| v.abs() > 1e-12 * scale);
        if has_jump {
            if j + 1 < r || s != NormSpec::Finite(1.0) {
                return Err(Error::Divergence(format!(
                    "derivative of order {j} jumps, so the derivative of order {r} is not in L_{s}"
                )));
            }
            atoms = jumps.iter().map(|&(_, v)| v.abs()).sum();
        }
        current = current.derivative();
    }
    let ac = current.lp_norm(s)?;
    Ok(ac + atoms)
}
