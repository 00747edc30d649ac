//! Catalog of extremal pairs `(Omega, Phi)`: the measure generating the dual
//! representation of `D^k f(0)` and the function turning the additive
//! inequality into an equality (or an approximating family).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::{
    power, Density, DomainKind, Func, IntegratedDensity, NormSpec, Piece, PiecewiseFunction, StieltjesMeasure,
};
use crate::quad::{integrate_finite, QuadratureSpec};
use crate::solvers::{
    dual_power, high_plateaus, signed_power, solve_equation_fullline_low, solve_system_fullline_high,
    solve_system_halfline_high, tau_high, tau_low, ExtremalParams, SOLVER_QUAD_TOL,
};
use crate::special::{gamma, kernel_r};

/// The eight constructible cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseId {
    /// Half-line, `r = 1`, `k in (0, 1 - 1/s)`, `p = q = inf`.
    R1Halfline,
    /// Line, `r = 1`, `k in (0, 1 - 1/s)`, `p = q = inf`.
    R1Fullline,
    /// Line, `r = 1`, `p = q = s = 1` (Stein-type inequality).
    SteinR1,
    /// Half-line, `r = 2`, `k in (0, 1)`, `s in [1, inf]`.
    R2HalflineLow,
    /// Half-line, `r = 2`, `k in (1, 2 - 1/s)`, `s in (1, inf]`.
    R2HalflineHigh,
    /// Line, `r = 2`, `k in (0, 1)`, `s in [1, inf]`.
    R2FulllineLow,
    /// Line, `r = 2`, `k in (1, 2 - 1/s)`, `s in (1, inf]`.
    R2FulllineHigh,
    /// Half-line, `r = 2`, `k in (0, 1)`, `s = inf`, Arestov's closed form.
    ArestovHalfline,
}

impl CaseId {
    pub const ALL: [CaseId; 8] = [
        Self::R1Halfline,
        Self::R1Fullline,
        Self::SteinR1,
        Self::R2HalflineLow,
        Self::R2HalflineHigh,
        Self::R2FulllineLow,
        Self::R2FulllineHigh,
        Self::ArestovHalfline,
    ];

    /// Identifier used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Self::R1Halfline => "r1-halfline",
            Self::R1Fullline => "r1-fullline",
            Self::SteinR1 => "stein-r1",
            Self::R2HalflineLow => "r2-halfline-low",
            Self::R2HalflineHigh => "r2-halfline-high",
            Self::R2FulllineLow => "r2-fullline-low",
            Self::R2FulllineHigh => "r2-fullline-high",
            Self::ArestovHalfline => "arestov-halfline",
        }
    }

    pub fn domain(self) -> DomainKind {
        match self {
            Self::R1Halfline | Self::R2HalflineLow | Self::R2HalflineHigh | Self::ArestovHalfline => {
                DomainKind::HalfLine
            }
            _ => DomainKind::FullLine,
        }
    }

    /// Smoothness `r`.
    pub fn r(self) -> usize {
        match self {
            Self::R1Halfline | Self::R1Fullline | Self::SteinR1 => 1,
            _ => 2,
        }
    }

    /// Norm exponents `(p, q)` of `f` and `D^k f`.
    pub fn pq(self) -> (NormSpec, NormSpec) {
        match self {
            Self::SteinR1 => (NormSpec::Finite(1.0), NormSpec::Finite(1.0)),
            _ => (NormSpec::Infinite, NormSpec::Infinite),
        }
    }

    /// Published figure drawn for this case, if any.
    pub fn figure(self) -> Option<u8> {
        match self {
            Self::R2HalflineHigh => Some(1),
            Self::R2FulllineLow => Some(2),
            Self::R2FulllineHigh => Some(3),
            _ => None,
        }
    }

    /// Checks that `(k, s)` is admissible, naming the violated condition.
    pub fn validate(self, k: f64, s: NormSpec) -> Result<()> {
        let inv_s = s.reciprocal();
        let fail = |cond: String| Err(Error::Domain(format!("{}: {cond}", self.name())));
        match self {
            Self::R1Halfline | Self::R1Fullline => {
                if !(k > 0.0 && k < 1.0 - inv_s) {
                    return fail(format!("k must lie in (0, 1 - 1/s) = (0, {}), got k = {k}", 1.0 - inv_s));
                }
            }
            Self::SteinR1 => {
                if s != NormSpec::Finite(1.0) {
                    return fail(format!("s must be 1, got {s}"));
                }
                if !(k > 0.0 && k < 1.0) {
                    return fail(format!("k must lie in (0, 1), got k = {k}"));
                }
            }
            Self::R2HalflineLow | Self::R2FulllineLow => {
                if !(k > 0.0 && k < 1.0) {
                    return fail(format!("k must lie in (0, 1), got k = {k}"));
                }
            }
            Self::ArestovHalfline => {
                if !s.is_infinite() {
                    return fail(format!("s must be inf, got {s}"));
                }
                if !(k > 0.0 && k < 1.0) {
                    return fail(format!("k must lie in (0, 1), got k = {k}"));
                }
            }
            Self::R2HalflineHigh | Self::R2FulllineHigh => {
                if s == NormSpec::Finite(1.0) || !(k > 1.0 && k < 2.0 - inv_s) {
                    return fail(format!(
                        "k must lie in (1, 2 - 1/s) = (1, {}) with s > 1, got k = {k}, s = {s}",
                        2.0 - inv_s
                    ));
                }
            }
        }
        Ok(())
    }

    /// Case matching a problem specification, if one is constructible.
    pub fn for_problem(domain: DomainKind, r: usize, k: f64, p: NormSpec, q: NormSpec, s: NormSpec) -> Result<Self> {
        let inf = NormSpec::Infinite;
        let one = NormSpec::Finite(1.0);
        let case = match (domain, r) {
            (DomainKind::FullLine, 1) if p == one && q == one && s == one => Self::SteinR1,
            (_, _) if p != inf || q != inf => {
                return Err(Error::Unsupported(format!(
                    "p = {p}, q = {q}: supported are p = q = inf, or p = q = s = 1 on the line with r = 1"
                )))
            }
            (DomainKind::HalfLine, 1) => Self::R1Halfline,
            (DomainKind::FullLine, 1) => Self::R1Fullline,
            (DomainKind::HalfLine, 2) if k < 1.0 => Self::R2HalflineLow,
            (DomainKind::HalfLine, 2) => Self::R2HalflineHigh,
            (DomainKind::FullLine, 2) if k < 1.0 => Self::R2FulllineLow,
            (DomainKind::FullLine, 2) => Self::R2FulllineHigh,
            _ => {
                return Err(Error::Unsupported(format!(
                    "r = {r}: extremal pairs exist only for r = 1 and r = 2 (nearest supported: r = 2)"
                )))
            }
        };
        case.validate(k, s)?;
        Ok(case)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|c| c.name()).collect();
                Error::Domain(format!("unknown case '{s}', expected one of {}", names.join(", ")))
            })
    }
}

/// Steklov averages `S_eps chi_(0,h)` approaching the extremal value.
#[derive(Debug, Clone)]
pub struct EpsilonFamily {
    base: PiecewiseFunction,
    /// Default ladder of `eps` values.
    pub ladder: Vec<f64>,
}

impl EpsilonFamily {
    /// Family member at `eps`.
    pub fn member(&self, eps: f64) -> Result<PiecewiseFunction> {
        self.base.steklov_average(eps)
    }

    /// The limit function `chi_(0,h)`.
    pub fn limit(&self) -> &PiecewiseFunction {
        &self.base
    }
}

/// Extremal function or approximating family.
#[derive(Debug, Clone)]
pub enum Phi {
    Exact(Func),
    Family(EpsilonFamily),
}

type Tau = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A catalog entry.
#[derive(Clone)]
pub struct ExtremalPair {
    pub case: CaseId,
    pub k: f64,
    pub s: NormSpec,
    pub h: f64,
    /// `Omega` as a function on the line (zero to the left of its support).
    pub omega: PiecewiseFunction,
    pub measure: StieltjesMeasure,
    pub phi: Phi,
    pub params: Option<ExtremalParams>,
    tau: Tau,
    tau_nodes: Vec<f64>,
    tau_exponents: Vec<(Option<f64>, Option<f64>)>,
}

impl fmt::Debug for ExtremalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtremalPair")
            .field("case", &self.case)
            .field("k", &self.k)
            .field("s", &self.s)
            .field("h", &self.h)
            .field("params", &self.params)
            .finish()
    }
}

impl ExtremalPair {
    pub fn domain(&self) -> DomainKind {
        self.case.domain()
    }

    pub fn r(&self) -> usize {
        self.case.r()
    }

    /// `tau = Gamma(r-k) (R_{r-k} - Omega^[r-1])` at scale one.
    pub fn tau(&self, x: f64) -> f64 {
        (self.tau)(x)
    }

    /// Nodes of `tau` (support ends, sign changes, kinks) at scale one.
    pub fn tau_nodes(&self) -> &[f64] {
        &self.tau_nodes
    }

    /// `R_{r-k}(x) - Omega^[r-1](x)` at the pair's scale.
    pub fn kernel_difference(&self, x: f64) -> Result<f64> {
        let r = self.r() as f64;
        let h = self.h;
        Ok(h.powf(r - 1.0 - self.k) * self.tau(x / h) / gamma(r - self.k)?)
    }

    /// `Omega^[r-1]` built by exact repeated integration.
    pub fn omega_integral(&self) -> Result<PiecewiseFunction> {
        self.omega.repeated_integral(self.r() - 1)
    }

    /// The exact extremal function, or the family member at `eps`.
    pub fn phi_at(&self, eps: Option<f64>) -> Result<Func> {
        match (&self.phi, eps) {
            (Phi::Exact(f), _) => Ok(f.clone()),
            (Phi::Family(fam), Some(e)) => Ok(Func::Piecewise(fam.member(e)?)),
            (Phi::Family(fam), None) => Ok(Func::Piecewise(fam.member(fam.ladder[fam.ladder.len() - 1])?)),
        }
    }

    /// `||R_{r-k} - Omega^[r-1]||_{L_t}` at the pair's scale.
    pub fn kernel_norm(&self, t: NormSpec) -> Result<f64> {
        let r = self.r() as f64;
        let scale = self.h.powf(r - 1.0 - self.k + t.reciprocal()) / gamma(r - self.k)?;
        let tau = &self.tau;
        let raw = match t {
            NormSpec::Infinite => {
                let mut best = 0.0_f64;
                for w in self.tau_nodes.windows(2) {
                    let pad = 1e-12 * (w[1] - w[0]);
                    let v = crate::funcmodel::sup_on(|x| tau(x).abs(), w[0] + pad, w[1] - pad)?;
                    best = best.max(v);
                }
                best
            }
            NormSpec::Finite(v) => {
                let spec = QuadratureSpec::with_tol(SOLVER_QUAD_TOL);
                let mut total = 0.0;
                for (i, w) in self.tau_nodes.windows(2).enumerate() {
                    let (l, rr) = self.tau_exponents[i];
                    let s = QuadratureSpec {
                        left_exponent: l.map(|e| e * v),
                        right_exponent: rr.map(|e| e * v),
                        ..spec
                    };
                    total += integrate_finite(|x| tau(x).abs().powf(v), w[0], w[1], &s)?.value;
                }
                total.powf(1.0 / v)
            }
        };
        Ok(scale * raw)
    }

    /// Rescaled pair: `Omega_h = h^-k Omega(./h)`, `Phi_h = Phi(./h)`.
    pub fn dilated(&self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(format!("scale h must be positive, got {h}")));
        }
        let omega = self.omega.dilated(h, h.powf(-self.k))?;
        let measure = StieltjesMeasure::from_bv(&omega)?;
        let phi = match &self.phi {
            Phi::Exact(f) => Phi::Exact(f.dilated(h, 1.0)?),
            Phi::Family(fam) => Phi::Family(EpsilonFamily {
                base: fam.base.dilated(h, 1.0)?,
                ladder: fam.ladder.iter().map(|e| e * h).collect(),
            }),
        };
        Ok(Self {
            h: self.h * h,
            omega,
            measure,
            phi,
            ..self.clone()
        })
    }
}

/// Builds the pair of `case` for order `k`, exponent `s` and scale `h`.
pub fn build_case(case: CaseId, k: f64, s: NormSpec, h: f64) -> Result<ExtremalPair> {
    case.validate(k, s)?;
    let pair = match case {
        CaseId::R1Halfline | CaseId::R1Fullline => build_r1(case.domain(), k, s)?,
        CaseId::SteinR1 => build_stein(k)?,
        CaseId::R2HalflineLow => build_r2_halfline_low(k, s)?,
        CaseId::ArestovHalfline => build_arestov_halfline(k)?,
        CaseId::R2HalflineHigh => build_r2_halfline_high(k, s)?,
        CaseId::R2FulllineLow => build_r2_fullline_low(k, s)?,
        CaseId::R2FulllineHigh => build_r2_fullline_high(k, s)?,
    };
    if h == 1.0 {
        Ok(pair)
    } else {
        pair.dilated(h)
    }
}

/// `Omega` for `r = 1`: `1/Gamma(1-k)` on `(0, 1)`, `x^-k / Gamma(1-k)` beyond.
fn omega_r1(k: f64) -> Result<PiecewiseFunction> {
    let g = gamma(1.0 - k)?;
    PiecewiseFunction::new(
        DomainKind::FullLine,
        vec![0.0, 1.0],
        vec![
            Piece::zero(),
            Piece::constant(1.0 / g),
            Piece::zero().with_powers(vec![power(1.0 / g, -k)]),
        ],
    )
}

/// `Omega` for `r = 2` with plateaus `values[i]` on `[cuts[i], cuts[i+1])`
/// and the tail `(1-k) x^-k` beyond `1`, all divided by `Gamma(2-k)`.
fn omega_r2(k: f64, cuts: &[f64], values: &[f64]) -> Result<PiecewiseFunction> {
    let g = gamma(2.0 - k)?;
    let mut bps = cuts.to_vec();
    bps.push(1.0);
    let mut pieces = vec![Piece::zero()];
    pieces.extend(values.iter().map(|v| Piece::constant(v / g)));
    pieces.push(Piece::zero().with_powers(vec![power((1.0 - k) / g, -k)]));
    PiecewiseFunction::new(DomainKind::FullLine, bps, pieces)
}

/// Piecewise function obtained by integrating a piecewise-constant density
/// `order` times from `nodes[0]` with prescribed `base = [Phi(L), Phi'(L), ...]`.
fn integrate_signs(domain: DomainKind, nodes: &[f64], signs: &[f64], base: &[f64]) -> Result<PiecewiseFunction> {
    let order = base.len();
    let (bps, mut pieces): (Vec<f64>, Vec<Piece>) = match domain {
        DomainKind::FullLine => (nodes.to_vec(), vec![Piece::zero()]),
        DomainKind::HalfLine => (nodes[1..].to_vec(), Vec::new()),
    };
    pieces.extend(signs.iter().map(|&v| Piece::constant(v)));
    pieces.push(Piece::zero());
    let g = PiecewiseFunction::new(domain, bps, pieces)?;
    let mut f = g.repeated_integral(order)?;
    let l = nodes[0];
    let poly = match domain {
        DomainKind::FullLine => {
            if base[1..].iter().any(|&v| v != 0.0) {
                return Err(Error::Domain("a bounded function on the line starts flat".into()));
            }
            PiecewiseFunction::constant(domain, base[0])
        }
        DomainKind::HalfLine => {
            let mut coeffs = Vec::with_capacity(order);
            let mut fact = 1.0;
            for (j, &b) in base.iter().enumerate() {
                if j > 0 {
                    fact *= j as f64;
                }
                coeffs.push(b / fact);
            }
            PiecewiseFunction::new(domain, Vec::new(), vec![Piece::poly(l, coeffs)])?
        }
    };
    f = f.add(&poly)?;
    f.with_constant_tail(1e-9)
}

struct DensitySetup {
    domain: DomainKind,
    order: usize,
    nodes: Vec<f64>,
    exponents: Vec<(Option<f64>, Option<f64>)>,
    tau: Tau,
    sign: f64,
    s: NormSpec,
}

/// `Phi` from the density `sign * tau_(s')` normalised in `L_s`; the base
/// values at the left end come from the moments over `[nodes[0], centre_end]`.
fn density_phi(setup: &DensitySetup, centre_end: f64) -> Result<Func> {
    let q = dual_power(setup.s);
    let tau = setup.tau.clone();
    let sign = setup.sign;
    let g = move |x: f64| sign * signed_power(tau(x), q);
    let spec = QuadratureSpec::with_tol(SOLVER_QUAD_TOL);
    let l = setup.nodes[0];
    let integrate = |f: &dyn Fn(f64) -> f64, hi: f64, scale: f64| -> Result<f64> {
        let mut total = 0.0;
        for (i, w) in setup.nodes.windows(2).enumerate() {
            let (a, b) = (w[0], w[1].min(hi));
            if b <= a {
                continue;
            }
            let (el, er) = setup.exponents[i];
            let s = QuadratureSpec {
                left_exponent: el.map(|e| e * scale),
                right_exponent: if b == w[1] { er.map(|e| e * scale) } else { None },
                ..spec
            };
            total += integrate_finite(f, a, b, &s)?.value;
        }
        Ok(total)
    };
    let norm = match setup.s {
        NormSpec::Infinite => 1.0,
        NormSpec::Finite(v) => integrate(&|x| g(x).abs().powf(v), f64::INFINITY, v)?.powf(1.0 / v),
    };
    let first = integrate(&|x| (x - l) * g(x), centre_end, 1.0)?;
    let mass = integrate(&g, centre_end, 1.0)?;
    let base = match (setup.order, setup.domain) {
        (1, _) => vec![-0.5 * mass / norm],
        (_, DomainKind::HalfLine) => vec![0.5 * first / norm, -mass / norm],
        (_, DomainKind::FullLine) => vec![0.5 * (first + l * mass) / norm, 0.0],
    };
    let density: Density = Arc::new(move |x| g(x) / norm);
    let f = IntegratedDensity::new(
        setup.domain,
        setup.order,
        setup.nodes.clone(),
        setup.exponents.clone(),
        base,
        density,
        SOLVER_QUAD_TOL,
    )?;
    Ok(Func::Integrated(f))
}

fn build_r1(domain: DomainKind, k: f64, s: NormSpec) -> Result<ExtremalPair> {
    let case = if domain == DomainKind::HalfLine {
        CaseId::R1Halfline
    } else {
        CaseId::R1Fullline
    };
    let omega = omega_r1(k)?;
    let tau: Tau = Arc::new(move |x: f64| if x > 0.0 && x < 1.0 { x.powf(-k) - 1.0 } else { 0.0 });
    let q = dual_power(s);
    let exponents = vec![(Some(-k), Some(1.0))];
    let phi = match s {
        NormSpec::Infinite => {
            let nodes = [0.0, 1.0];
            Func::Piecewise(integrate_signs(domain, &nodes, &[-1.0], &[0.5])?)
        }
        _ => {
            let setup = DensitySetup {
                domain,
                order: 1,
                nodes: vec![0.0, 1.0],
                exponents: vec![(Some(-k * q), Some(q))],
                tau: tau.clone(),
                sign: -1.0,
                s,
            };
            density_phi(&setup, 1.0)?
        }
    };
    finish(case, k, s, omega, Phi::Exact(phi), None, tau, vec![0.0, 1.0], exponents)
}

fn build_stein(k: f64) -> Result<ExtremalPair> {
    let omega = omega_r1(k)?;
    let tau: Tau = Arc::new(move |x: f64| if x > 0.0 && x < 1.0 { x.powf(-k) - 1.0 } else { 0.0 });
    let family = EpsilonFamily {
        base: PiecewiseFunction::indicator(DomainKind::FullLine, 0.0, 1.0)?,
        ladder: vec![1e-1, 1e-2, 1e-3, 1e-4],
    };
    finish(
        CaseId::SteinR1,
        k,
        NormSpec::Finite(1.0),
        omega,
        Phi::Family(family),
        None,
        tau,
        vec![0.0, 1.0],
        vec![(Some(-k), Some(1.0))],
    )
}

fn tau_halfline_low(k: f64) -> Tau {
    Arc::new(move |x: f64| if x > 0.0 && x < 1.0 { x.powf(1.0 - k) - x } else { 0.0 })
}

fn build_r2_halfline_low(k: f64, s: NormSpec) -> Result<ExtremalPair> {
    let omega = omega_r2(k, &[0.0], &[1.0])?;
    let tau = tau_halfline_low(k);
    let q = dual_power(s);
    let exponents = vec![(Some(1.0 - k), Some(1.0))];
    let phi = match s {
        NormSpec::Infinite => arestov_phi()?,
        NormSpec::Finite(v) if v == 1.0 => {
            let xs = (1.0 - k).powf(1.0 / k);
            PiecewiseFunction::new(
                DomainKind::HalfLine,
                vec![xs],
                vec![Piece::poly(0.0, vec![0.5 * xs, -1.0]), Piece::constant(-0.5 * xs)],
            )?
            .into()
        }
        _ => {
            let setup = DensitySetup {
                domain: DomainKind::HalfLine,
                order: 2,
                nodes: vec![0.0, 1.0],
                exponents: vec![(Some((1.0 - k) * q), Some(q))],
                tau: tau.clone(),
                sign: 1.0,
                s,
            };
            density_phi(&setup, 1.0)?
        }
    };
    finish(CaseId::R2HalflineLow, k, s, omega, Phi::Exact(phi), None, tau, vec![0.0, 1.0], exponents)
}

fn arestov_phi() -> Result<Func> {
    Ok(PiecewiseFunction::new(
        DomainKind::HalfLine,
        vec![1.0],
        vec![Piece::poly(0.0, vec![0.25, -1.0, 0.5]), Piece::constant(-0.25)],
    )?
    .into())
}

fn build_arestov_halfline(k: f64) -> Result<ExtremalPair> {
    let omega = omega_r2(k, &[0.0], &[1.0])?;
    finish(
        CaseId::ArestovHalfline,
        k,
        NormSpec::Infinite,
        omega,
        Phi::Exact(arestov_phi()?),
        None,
        tau_halfline_low(k),
        vec![0.0, 1.0],
        vec![(Some(1.0 - k), Some(1.0))],
    )
}

fn build_r2_halfline_high(k: f64, s: NormSpec) -> Result<ExtremalPair> {
    let params = solve_system_halfline_high(k, s)?;
    let a = params.a.expect("half-line system fixes a");
    let b = params.b;
    let (c1, c2) = high_plateaus(k, a, b, 0.0);
    let omega = omega_r2(k, &[0.0, a], &[c1, c2])?;
    let tau: Tau = Arc::new(move |x| if x > 0.0 { tau_high(k, a, b, 0.0, x) } else { 0.0 });
    let q = dual_power(s);
    let nodes = vec![0.0, a, b, 1.0];
    let exps = |e: f64| vec![(Some((1.0 - k) * e), None), (None, Some(e)), (Some(e), Some(e))];
    let phi = match s {
        NormSpec::Infinite => {
            Func::Piecewise(integrate_signs(
                DomainKind::HalfLine,
                &nodes,
                &[1.0, 1.0, -1.0],
                &[0.25 * a * a, -a],
            )?)
        }
        _ => {
            let setup = DensitySetup {
                domain: DomainKind::HalfLine,
                order: 2,
                nodes: nodes.clone(),
                exponents: exps(q),
                tau: tau.clone(),
                sign: 1.0,
                s,
            };
            density_phi(&setup, a)?
        }
    };
    finish(
        CaseId::R2HalflineHigh,
        k,
        s,
        omega,
        Phi::Exact(phi),
        Some(params),
        tau,
        nodes,
        exps(1.0),
    )
}

fn build_r2_fullline_low(k: f64, s: NormSpec) -> Result<ExtremalPair> {
    let params = solve_equation_fullline_low(k, s)?;
    let p = params.p.expect("line equation fixes p");
    let b = params.b;
    let omega = omega_r2(k, &[-p], &[1.0 / (1.0 + p)])?;
    let tau: Tau = Arc::new(move |x| tau_low(k, p, x));
    let q = dual_power(s);
    let nodes = vec![-p, 0.0, b, 1.0];
    let exps = |e: f64| vec![(Some(e), None), (None, Some(e)), (Some(e), Some(e))];
    let phi = match s {
        NormSpec::Finite(v) if v == 1.0 => PiecewiseFunction::new(
            DomainKind::FullLine,
            vec![-p, 1.0],
            vec![
                Piece::constant(0.25 * (1.0 + p)),
                Piece::poly(-p, vec![0.25 * (1.0 + p), -0.5]),
                Piece::constant(-0.25 * (1.0 + p)),
            ],
        )?
        .into(),
        NormSpec::Infinite => {
            let first = -0.5 * (b * b - p * p) + 0.5 * (1.0 - b * b);
            Func::Piecewise(integrate_signs(
                DomainKind::FullLine,
                &nodes,
                &[-1.0, -1.0, 1.0],
                &[0.5 * first, 0.0],
            )?)
        }
        _ => {
            let setup = DensitySetup {
                domain: DomainKind::FullLine,
                order: 2,
                nodes: nodes.clone(),
                exponents: exps(q),
                tau: tau.clone(),
                sign: 1.0,
                s,
            };
            density_phi(&setup, 1.0)?
        }
    };
    finish(
        CaseId::R2FulllineLow,
        k,
        s,
        omega,
        Phi::Exact(phi),
        Some(params),
        tau,
        nodes,
        exps(1.0),
    )
}

fn build_r2_fullline_high(k: f64, s: NormSpec) -> Result<ExtremalPair> {
    let params = solve_system_fullline_high(k, s)?;
    let a = params.a.expect("line system fixes a");
    let p = params.p.expect("line system fixes p");
    let b = params.b;
    let (c1, c2) = high_plateaus(k, a, b, p);
    let omega = omega_r2(k, &[-p, a], &[c1, c2])?;
    let tau: Tau = Arc::new(move |x| tau_high(k, a, b, p, x));
    let q = dual_power(s);
    let nodes = vec![-p, 0.0, a, b, 1.0];
    let exps = |e: f64| {
        vec![
            (Some(e), None),
            (Some((1.0 - k) * e), None),
            (None, Some(e)),
            (Some(e), Some(e)),
        ]
    };
    let phi = match s {
        NormSpec::Infinite => {
            let first = 0.5 * p * p + 0.5 * a * a;
            Func::Piecewise(integrate_signs(
                DomainKind::FullLine,
                &nodes,
                &[-1.0, 1.0, 1.0, -1.0],
                &[0.5 * first, 0.0],
            )?)
        }
        _ => {
            let setup = DensitySetup {
                domain: DomainKind::FullLine,
                order: 2,
                nodes: nodes.clone(),
                exponents: exps(q),
                tau: tau.clone(),
                sign: 1.0,
                s,
            };
            density_phi(&setup, a)?
        }
    };
    finish(
        CaseId::R2FulllineHigh,
        k,
        s,
        omega,
        Phi::Exact(phi),
        Some(params),
        tau,
        nodes,
        exps(1.0),
    )
}

#[allow(clippy::too_many_arguments)]
fn finish(
    case: CaseId,
    k: f64,
    s: NormSpec,
    omega: PiecewiseFunction,
    phi: Phi,
    params: Option<ExtremalParams>,
    tau: Tau,
    tau_nodes: Vec<f64>,
    tau_exponents: Vec<(Option<f64>, Option<f64>)>,
) -> Result<ExtremalPair> {
    let measure = StieltjesMeasure::from_bv(&omega)?;
    Ok(ExtremalPair {
        case,
        k,
        s,
        h: 1.0,
        omega,
        measure,
        phi,
        params,
        tau,
        tau_nodes,
        tau_exponents,
    })
}

/// One row of figure data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub x: f64,
    /// `Gamma(r-k) R_{r-k}(x)`.
    pub kernel: f64,
    /// `Gamma(r-k) Omega^[r-1](x)`.
    pub omega_integral: f64,
    pub tau: f64,
    pub phi: f64,
}

/// Samples the three panels (kernel and `omega^[r-1]`, `tau`, `phi`) on `n` points.
pub fn figure_data(pair: &ExtremalPair, n: usize) -> Result<Vec<FigureRow>> {
    let g = gamma(pair.r() as f64 - pair.k)?;
    let big = pair.omega_integral()?;
    let phi = pair.phi_at(None)?;
    let lo = pair.tau_nodes.first().copied().unwrap_or(0.0).min(0.0);
    let (lo, hi) = match pair.domain() {
        DomainKind::HalfLine => (0.0, 1.25),
        DomainKind::FullLine => (lo - 0.25, 1.25),
    };
    let n = n.max(2);
    (0..n)
        .map(|j| {
            let x = (lo + (hi - lo) * j as f64 / (n - 1) as f64) * pair.h;
            Ok(FigureRow {
                x,
                kernel: g * kernel_r(pair.r() as f64 - pair.k, x)?,
                omega_integral: g * big.eval(x),
                tau: pair.tau(x / pair.h),
                phi: phi.eval(x),
            })
        })
        .collect()
}

/// Closed forms printed for the classical cases, kept for comparison.
pub mod classical {
    use super::*;

    /// Line, `r = 2`, `k in (0, 1)`: the classical `Omega` (which coincides
    /// with the half-line one) and the quadratic `Phi` with `|Phi''| = 1`,
    /// plateaus `-+(1 + p)^2 / 8` and `p = 1 - 2^(-k/(1-k))`.
    pub fn geisberg(k: f64) -> Result<(PiecewiseFunction, PiecewiseFunction)> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain(format!("k must lie in (0, 1), got {k}")));
        }
        let p = 1.0 - 2f64.powf(-k / (1.0 - k));
        let m = 0.5 * (1.0 - p);
        let c = (1.0 + p).powi(2) / 8.0;
        let phi = PiecewiseFunction::new(
            DomainKind::FullLine,
            vec![-p, m, 1.0],
            vec![
                Piece::constant(-c),
                Piece::poly(-p, vec![-c, 0.0, 0.5]),
                Piece::poly(1.0, vec![c, 0.0, -0.5]),
                Piece::constant(c),
            ],
        )?;
        Ok((omega_r2(k, &[0.0], &[1.0])?, phi))
    }

    /// Half-line, `r = 2`, `k in (1, 2)`: the printed `Omega` and `Phi`.
    pub fn arestov_high(k: f64) -> Result<(PiecewiseFunction, PiecewiseFunction)> {
        if !(k > 1.0 && k < 2.0) {
            return Err(Error::Domain(format!("k must lie in (1, 2), got {k}")));
        }
        let r2 = 2f64.sqrt();
        let g = gamma(2.0 - k)?;
        let a = r2 - 1.0;
        let omega = PiecewiseFunction::new(
            DomainKind::FullLine,
            vec![0.0, a, 1.0],
            vec![
                Piece::zero(),
                Piece::constant((3.0 - 2f64.powf((k + 1.0) / 2.0)) / g),
                Piece::constant((2f64.powf(k / 2.0) - r2) / (g * a)),
                Piece::zero().with_powers(vec![power(1.0 / gamma(1.0 - k)?, -k)]),
            ],
        )?;
        let phi = PiecewiseFunction::new(
            DomainKind::HalfLine,
            vec![1.0 / r2, 1.0],
            vec![
                Piece::poly(0.0, vec![(3.0 - 2.0 * r2) / 4.0, -(r2 - 1.0), 0.5]),
                Piece::poly(0.0, vec![(1.0 - 2.0 * r2) / 4.0, 1.0, -0.5]),
                Piece::constant((3.0 - 2.0 * r2) / 4.0),
            ],
        )?;
        Ok((omega, phi))
    }
}
