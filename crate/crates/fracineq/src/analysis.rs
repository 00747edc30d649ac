//! Sharp constants, additive inequality coefficients, Stechkin best
//! approximation values, optimal recovery errors, the three-numbers
//! problem and the transfer to Hadamard derivatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{build_case, CaseId, ExtremalPair, Phi};
use crate::error::{Error, Result};
use crate::funcmodel::{DomainKind, Func, NormSpec, Piece, PiecewiseFunction};
use crate::marchaud::{by_representation, hadamard_derivative_log, sup_norm_scan, LeftExpansion};
use crate::quad::{integrate_finite, integrate_semi_infinite, QuadratureSpec};
use crate::solvers::ExtremalParams;
use crate::special::FracOrder;

/// Parameters of an inequality `||D^k f||_q <= K ||f||_p^mu ||f^(r)||_s^lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemSpec {
    pub domain: DomainKind,
    pub k: f64,
    pub r: usize,
    pub p: NormSpec,
    pub q: NormSpec,
    pub s: NormSpec,
}

impl ProblemSpec {
    /// Validates the order and the finiteness condition `r/q <= (r-k)/p + k/s`.
    pub fn new(domain: DomainKind, k: f64, r: usize, p: NormSpec, q: NormSpec, s: NormSpec) -> Result<Self> {
        FracOrder::new(k, r)?;
        let spec = Self { domain, k, r, p, q, s };
        exponents(&spec)?;
        Ok(spec)
    }

    /// The uniform-norm problem `p = q = inf`.
    pub fn uniform(domain: DomainKind, k: f64, r: usize, s: NormSpec) -> Result<Self> {
        Self::new(domain, k, r, NormSpec::Infinite, NormSpec::Infinite, s)
    }

    /// Specification of the problem solved by a catalog case.
    pub fn for_case(case: CaseId, k: f64, s: NormSpec) -> Result<Self> {
        let (p, q) = case.pq();
        Self::new(case.domain(), k, case.r(), p, q, s)
    }

    /// Catalog case answering this problem.
    pub fn case(&self) -> Result<CaseId> {
        CaseId::for_problem(self.domain, self.r, self.k, self.p, self.q, self.s)
    }

    /// Exponents `(a, b)` of the scale in `A h^a ||f|| + B h^b ||f^(r)||`.
    pub fn scale_exponents(&self) -> (f64, f64) {
        let (ip, iq, is) = (self.p.reciprocal(), self.q.reciprocal(), self.s.reciprocal());
        (-(self.k - iq + ip), self.r as f64 - self.k - is + iq)
    }
}

/// `(lambda, mu)` with `lambda = (k - 1/q + 1/p) / (r - 1/s + 1/p)` and `mu = 1 - lambda`.
pub fn exponents(spec: &ProblemSpec) -> Result<(f64, f64)> {
    let (ip, iq, is) = (spec.p.reciprocal(), spec.q.reciprocal(), spec.s.reciprocal());
    let r = spec.r as f64;
    if r * iq > (r - spec.k) * ip + spec.k * is + 1e-14 {
        return Err(Error::Domain(format!(
            "finiteness condition r/q <= (r-k)/p + k/s fails: {} > {}",
            r * iq,
            (r - spec.k) * ip + spec.k * is
        )));
    }
    let lambda = (spec.k - iq + ip) / (r - is + ip);
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("lambda = {lambda} must lie in [0, 1]")));
    }
    Ok((lambda, 1.0 - lambda))
}

/// One rung of an epsilon ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderStep {
    pub eps: f64,
    /// `||D^k Phi_eps|| / (K ||Phi_eps||^mu ||Phi_eps^(r)||^lambda)`.
    pub ratio: f64,
}

/// Sharp constant together with its certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpResult {
    pub case: CaseId,
    pub domain: DomainKind,
    pub k: f64,
    pub r: usize,
    pub p: NormSpec,
    pub q: NormSpec,
    pub s: NormSpec,
    pub lambda: f64,
    pub mu: f64,
    #[serde(rename = "K")]
    pub k_sharp: f64,
    /// `Var Omega` at scale one.
    #[serde(rename = "A1")]
    pub a1: f64,
    /// Norm of `R_{r-k} - Omega^[r-1]` at scale one.
    #[serde(rename = "B1")]
    pub b1: f64,
    /// Constant obtained by minimising the additive bound over the scale.
    pub k_additive: f64,
    /// Constant realised by the extremal function, if one exists.
    pub k_extremal: Option<f64>,
    /// Point where `|D^k Phi|` is largest.
    pub maximizer: Option<f64>,
    pub ladder: Vec<LadderStep>,
    pub params: Option<ExtremalParams>,
    pub provenance: String,
}

impl SharpResult {
    /// `A(h) = h^a A1`.
    pub fn a_of_h(&self, h: f64) -> f64 {
        h.powf(self.spec().scale_exponents().0) * self.a1
    }

    /// `B(h) = h^b B1`.
    pub fn b_of_h(&self, h: f64) -> f64 {
        h.powf(self.spec().scale_exponents().1) * self.b1
    }

    /// `A(h) M0 + B(h) Mr`.
    pub fn additive_bound(&self, h: f64, m0: f64, mr: f64) -> f64 {
        self.a_of_h(h) * m0 + self.b_of_h(h) * mr
    }

    /// Scale minimising the additive bound for the given norms.
    pub fn optimal_scale(&self, m0: f64, mr: f64) -> f64 {
        let (a, b) = self.spec().scale_exponents();
        (-a * self.a1 * m0 / (b * self.b1 * mr)).powf(1.0 / (b - a))
    }

    /// `K M0^mu Mr^lambda`.
    pub fn multiplicative_bound(&self, m0: f64, mr: f64) -> f64 {
        self.k_sharp * m0.powf(self.mu) * mr.powf(self.lambda)
    }

    fn spec(&self) -> ProblemSpec {
        ProblemSpec {
            domain: self.domain,
            k: self.k,
            r: self.r,
            p: self.p,
            q: self.q,
            s: self.s,
        }
    }

    fn require_uniform_target(&self) -> Result<()> {
        if !self.q.is_infinite() {
            return Err(Error::Unsupported(format!(
                "the value is sharp only for q = inf, got q = {}",
                self.q
            )));
        }
        Ok(())
    }

    /// `E_N = lambda (1 - lambda)^(1/lambda - 1) K^(1/lambda) N^(1 - 1/lambda)`.
    pub fn stechkin_value(&self, n: f64) -> Result<f64> {
        self.require_uniform_target()?;
        if !(n > 0.0) {
            return Err(Error::Domain(format!("N must be positive, got {n}")));
        }
        let l = self.lambda;
        Ok(l * (1.0 - l).powf(1.0 / l - 1.0) * self.k_sharp.powf(1.0 / l) * n.powf(1.0 - 1.0 / l))
    }

    /// `K delta^(1 - lambda)`.
    pub fn recovery_error(&self, delta: f64) -> Result<f64> {
        self.require_uniform_target()?;
        if !(delta >= 0.0) {
            return Err(Error::Domain(format!("delta must be non-negative, got {delta}")));
        }
        Ok(self.k_sharp * delta.powf(1.0 - self.lambda))
    }

    /// Whether a function with `||f|| = M0`, `||D^k f|| = Mk`, `||f''|| = Mr` exists.
    pub fn three_numbers(&self, m0: f64, mk: f64, mr: f64) -> Result<ThreeNumbers> {
        if self.r != 2 || !self.p.is_infinite() || !self.q.is_infinite() {
            return Err(Error::Unsupported("three numbers need r = 2 and p = q = inf".into()));
        }
        if !(m0 > 0.0 && mk > 0.0 && mr > 0.0) {
            return Err(Error::Domain("M0, Mk and Mr must be positive".into()));
        }
        let bound = self.multiplicative_bound(m0, mr);
        let on_boundary = (mk - bound).abs() <= THREE_NUMBERS_BAND * bound;
        let closed = self.s != NormSpec::Finite(1.0);
        let verdict = if on_boundary {
            if closed {
                Feasibility::Boundary
            } else {
                Feasibility::Infeasible
            }
        } else if mk < bound {
            Feasibility::Feasible
        } else {
            Feasibility::Infeasible
        };
        Ok(ThreeNumbers {
            verdict,
            on_boundary,
            bound,
        })
    }
}

/// Relative width of the band treated as the boundary `Mk = K M0^mu Mr^lambda`.
pub const THREE_NUMBERS_BAND: f64 = 1e-12;

/// Verdict of the three-numbers problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Feasibility {
    Feasible,
    Infeasible,
    /// On the boundary of a closed feasibility region (attained).
    Boundary,
}

/// Three-numbers answer with the bound it was compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeNumbers {
    pub verdict: Feasibility,
    /// True when `Mk` lies within the boundary band, whatever the verdict.
    pub on_boundary: bool,
    pub bound: f64,
}

impl ThreeNumbers {
    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, Feasibility::Feasible | Feasibility::Boundary)
    }
}

/// Kernel norm exponent for the case: `L_1` for the Stein inequality, `L_{s'}` otherwise.
fn kernel_norm_exponent(case: CaseId, s: NormSpec) -> NormSpec {
    match case {
        CaseId::SteinR1 => NormSpec::Finite(1.0),
        _ => s.conjugate(),
    }
}

/// `(A, B)` of the additive inequality at scale `h`.
pub fn additive_coefficients(spec: &ProblemSpec, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("scale h must be positive, got {h}")));
    }
    let case = spec.case()?;
    let pair = build_case(case, spec.k, spec.s, 1.0)?;
    let (a1, b1) = unit_coefficients(&pair)?;
    let (ea, eb) = spec.scale_exponents();
    Ok((h.powf(ea) * a1, h.powf(eb) * b1))
}

fn unit_coefficients(pair: &ExtremalPair) -> Result<(f64, f64)> {
    let unit = if pair.h == 1.0 { pair.clone() } else { pair.dilated(1.0 / pair.h)? };
    let a1 = unit.measure.total_variation()?;
    let b1 = unit.kernel_norm(kernel_norm_exponent(unit.case, unit.s))?;
    Ok((a1, b1))
}

/// `min_h (A1 h^a M0 + B1 h^b Mr) / (M0^mu Mr^lambda)` in closed form.
pub fn additive_to_multiplicative(a1: f64, b1: f64, lambda: f64) -> f64 {
    a1.powf(1.0 - lambda) * b1.powf(lambda) / (lambda.powf(lambda) * (1.0 - lambda).powf(1.0 - lambda))
}

/// Sharp constant of the problem.
pub fn sharp_constant(spec: &ProblemSpec) -> Result<SharpResult> {
    sharp_constant_at_scale(spec, 1.0)
}

/// Sharp constant evaluated through the pair built at scale `h`.
pub fn sharp_constant_at_scale(spec: &ProblemSpec, h: f64) -> Result<SharpResult> {
    let case = spec.case()?;
    let pair = build_case(case, spec.k, spec.s, h)?;
    sharp_constant_for_pair(spec, &pair)
}

/// Sharp constant certified by an already built pair.
pub fn sharp_constant_for_pair(spec: &ProblemSpec, pair: &ExtremalPair) -> Result<SharpResult> {
    let (lambda, mu) = exponents(spec)?;
    let (a1, b1) = unit_coefficients(pair)?;
    let k_additive = additive_to_multiplicative(a1, b1, lambda);
    let mut result = SharpResult {
        case: pair.case,
        domain: spec.domain,
        k: spec.k,
        r: spec.r,
        p: spec.p,
        q: spec.q,
        s: spec.s,
        lambda,
        mu,
        k_sharp: k_additive,
        a1,
        b1,
        k_additive,
        k_extremal: None,
        maximizer: None,
        ladder: Vec::new(),
        params: pair.params.clone(),
        provenance: String::new(),
    };
    match &pair.phi {
        Phi::Exact(phi) => {
            let scan = sup_norm_scan(phi, spec.k, spec.r)?;
            let k_phi = scan.value / (phi.norm(spec.p)?.powf(mu) * phi.derivative_norm(spec.r, spec.s)?.powf(lambda));
            result.k_extremal = Some(k_phi);
            result.maximizer = Some(scan.argmax);
            result.k_sharp = k_phi;
            result.provenance = if ((k_additive - k_phi) / k_phi).abs() < 1e-8 {
                "extremal function; additive certificate agrees".into()
            } else {
                format!(
                    "extremal function; additive certificate is not tight ({k_additive:.12} vs {k_phi:.12})"
                )
            };
        }
        Phi::Family(family) => {
            for &eps in &family.ladder {
                let f = family.member(eps * pair.h)?;
                let lhs = marchaud_lq_norm(&f, spec.k, spec.r, spec.q)?;
                let rhs = k_additive * f.lp_norm(spec.p)?.powf(mu) * Func::from(f.clone()).derivative_norm(spec.r, spec.s)?.powf(lambda);
                result.ladder.push(LadderStep { eps, ratio: lhs / rhs });
            }
            result.provenance = "limit of the Steklov epsilon family; additive certificate".into();
        }
    }
    Ok(result)
}

/// `E_N` for the problem.
pub fn stechkin_value(spec: &ProblemSpec, n: f64) -> Result<f64> {
    sharp_constant(spec)?.stechkin_value(n)
}

/// Optimal recovery error `K delta^(1 - lambda)` for the problem.
pub fn recovery_error(spec: &ProblemSpec, delta: f64) -> Result<f64> {
    sharp_constant(spec)?.recovery_error(delta)
}

/// Three-numbers verdict for the problem.
pub fn three_numbers_feasible(spec: &ProblemSpec, m0: f64, mk: f64, mr: f64) -> Result<ThreeNumbers> {
    if spec.r != 2 {
        return Err(Error::Unsupported("three numbers need r = 2".into()));
    }
    sharp_constant(spec)?.three_numbers(m0, mk, mr)
}

/// `||D^k f||_{L_q}` over the domain of `f`.
///
/// `f` must be constant beyond its last breakpoint (and before its first one
/// on the line).
pub fn marchaud_lq_norm(f: &PiecewiseFunction, k: f64, r: usize, q: NormSpec) -> Result<f64> {
    let qv = match q {
        NormSpec::Infinite => return Ok(sup_norm_scan(&Func::from(f.clone()), k, r)?.value),
        NormSpec::Finite(v) => v,
    };
    let right = f
        .right_constant()
        .ok_or_else(|| Error::Unsupported("L_q norm of D^k f needs a constant right tail".into()))?;
    let bps = f.breakpoints();
    let Some(&first) = bps.first() else {
        return Ok(0.0);
    };
    let jumps: Vec<f64> = f.derivative_n(r - 1).jumps().into_iter().map(|(c, _)| c).collect();
    let beta = r as f64 - 1.0 - k;
    let spec = QuadratureSpec::default();
    let g = |x: f64| by_representation(f, k, r, x).map(|v| v.abs().powf(qv)).unwrap_or(f64::NAN);
    let mut points: Vec<f64> = bps.to_vec();
    if f.domain() == DomainKind::HalfLine && first > 0.0 {
        points.insert(0, 0.0);
    }
    let mut total = 0.0;
    for w in points.windows(2) {
        let s = QuadratureSpec {
            right_exponent: jumps.contains(&w[1]).then_some(beta * qv),
            ..spec
        };
        total += integrate_finite(g, w[0], w[1], &s)?.value;
    }
    if f.domain() == DomainKind::FullLine {
        let left = f.left_value();
        let decay = if (left - right).abs() > 1e-14 * left.abs().max(1.0) { k * qv } else { (1.0 + k) * qv };
        if decay <= 1.0 {
            return Err(Error::Divergence(format!("D^k f is not in L_{qv} on the line")));
        }
        let expansion = LeftExpansion::new(f, k, r)?;
        let cut = expansion.valid_below();
        let s = QuadratureSpec {
            right_exponent: jumps.contains(&first).then_some(beta * qv),
            ..spec
        };
        total += integrate_finite(g, cut, first, &s)?.value;
        let far = |y: f64| expansion.eval(-y).abs().powf(qv);
        total += integrate_semi_infinite(far, -cut, decay, &spec)?.value;
    }
    Ok(total.powf(1.0 / qv))
}

/// Weighted norm `(int_0^inf |F(x)|^s dx/x)^(1/s)` (`sup |F|` for `s = inf`)
/// of the Hadamard derivative `F` of `f(x) = g(ln x)`.
///
/// `F` is evaluated from the Hadamard integral of `f`; only the measure
/// `dx/x = dt` is written in `t = ln x`. Far to the left, beyond
/// `HADAMARD_FAR` units below the first kink, `F` is replaced by the model
/// `c1 y^-k + c2 y^(-k-1)` in the distance `y` to that kink, fitted at the
/// cut and at twice the cut.
pub fn hadamard_weighted_norm(g: &PiecewiseFunction, k: f64, n: usize, s: NormSpec) -> Result<f64> {
    if g.domain() != DomainKind::FullLine {
        return Err(Error::Domain("the logarithmic substitution needs g on the line".into()));
    }
    let right = g
        .right_constant()
        .ok_or_else(|| Error::Unsupported("g must be constant beyond its last breakpoint".into()))?;
    let bps = g.breakpoints();
    let kinks: Vec<f64> = bps.iter().map(|b| b.exp()).collect();
    let f = |x: f64| if x > 0.0 { g.eval(x.ln()) } else { g.left_value() };
    let hd = |t: f64| hadamard_derivative_log(f, &kinks, right, k, n, t);
    let (t0, t1) = (bps[0], bps[bps.len() - 1]);
    match s {
        NormSpec::Infinite => {
            let t_start = t0 - (t1 - t0).max(1.0);
            let mut ts: Vec<f64> = (0..=400)
                .map(|j| t_start + (t1 - t_start) * j as f64 / 400.0)
                .chain(bps.iter().copied())
                .collect();
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            let vals: Vec<f64> = ts.iter().map(|&t| hd(t).map(f64::abs)).collect::<Result<_>>()?;
            let mut best = vals.iter().copied().fold(0.0, f64::max);
            for j in 1..ts.len() - 1 {
                if vals[j] >= vals[j - 1] && vals[j] >= vals[j + 1] {
                    let (_, v) = crate::funcmodel::golden_argmax(&|t| hd(t).map(f64::abs).unwrap_or(0.0), ts[j - 1], ts[j + 1]);
                    best = best.max(v);
                }
            }
            Ok(best)
        }
        NormSpec::Finite(sv) => {
            let spec = QuadratureSpec::default();
            let w = |t: f64| hd(t).map(|v| v.abs().powf(sv)).unwrap_or(f64::NAN);
            let mut total = 0.0;
            for pair in bps.windows(2) {
                total += integrate_finite(w, pair[0], pair[1], &spec)?.value;
            }
            let mut lo = 0.0;
            let mut hi = 1.0;
            while lo < HADAMARD_FAR {
                total += integrate_finite(|y| w(t0 - y), lo, hi, &spec)?.value;
                lo = hi;
                hi = (hi * 10.0).min(HADAMARD_FAR);
            }
            let cut = HADAMARD_FAR;
            let (f1, f2) = (hd(t0 - cut)?, hd(t0 - 2.0 * cut)?);
            let (p1, q1) = (cut.powf(-k), cut.powf(-k - 1.0));
            let (p2, q2) = ((2.0 * cut).powf(-k), (2.0 * cut).powf(-k - 1.0));
            let det = p1 * q2 - q1 * p2;
            let c1 = (f1 * q2 - f2 * q1) / det;
            let c2 = (p1 * f2 - p2 * f1) / det;
            let model = |y: f64| (c1 * y.powf(-k) + c2 * y.powf(-k - 1.0)).abs().powf(sv);
            let decay = if c1.abs() > 1e-12 * c2.abs().max(f64::MIN_POSITIVE) { sv * k } else { sv * (1.0 + k) };
            if decay <= 1.0 {
                return Err(Error::Divergence(format!(
                    "the Hadamard derivative decays like |ln x|^(-{}) and is not in the weighted L_{sv}",
                    decay / sv
                )));
            }
            total += integrate_semi_infinite(model, cut, decay, &spec)?.value;
            Ok(total.powf(1.0 / sv))
        }
    }
}

/// Distance below the first kink, in `ln x`, where the far-left model takes over.
const HADAMARD_FAR: f64 = 1e4;

/// Sharp constant of the Hadamard inequality with weighted norms: the
/// Marchaud constant on the line for the same parameters.
pub fn hadamard_constant(spec: &ProblemSpec) -> Result<SharpResult> {
    if spec.domain != DomainKind::FullLine {
        return Err(Error::Domain("the Hadamard transfer uses the problem on the line".into()));
    }
    sharp_constant(spec)
}

/// Lower bound on the sharp constant of a uniform-norm problem on the line
/// from a random search over splines whose `r`-th derivative is piecewise
/// constant on `knots` cells of `[-w/2, w]`, maximising `|D^k f(0)|` under the norm ratio.
pub fn spline_search_lower_bound(spec: &ProblemSpec, knots: usize, restarts: usize, seed: u64) -> Result<f64> {
    if spec.domain != DomainKind::FullLine || !spec.p.is_infinite() || !spec.q.is_infinite() {
        return Err(Error::Unsupported("spline search needs the uniform problem on the line".into()));
    }
    let (lambda, mu) = exponents(spec)?;
    let r = spec.r;
    let ratio = |c: &[f64], width: f64| -> f64 {
        spline_ratio(c, width, spec.k, r, spec.s, lambda, mu).unwrap_or(0.0)
    };
    let best = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut c: Vec<f64> = (0..knots).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let width = rng.gen_range(0.5..3.0);
            let mut value = ratio(&c, width);
            let mut step = 0.5;
            while step > 1e-4 {
                let mut improved = false;
                for j in 0..knots {
                    for dir in [-1.0, 1.0] {
                        let mut trial = c.clone();
                        trial[j] += dir * step;
                        let v = ratio(&trial, width);
                        if v > value {
                            value = v;
                            c = trial;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    step *= 0.5;
                }
            }
            value
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

fn spline_ratio(c: &[f64], width: f64, k: f64, r: usize, s: NormSpec, lambda: f64, mu: f64) -> Result<f64> {
    let n = c.len();
    let start = -0.5 * width;
    let cell = 1.5 * width / n as f64;
    let bps: Vec<f64> = (0..=n).map(|j| start + j as f64 * cell).collect();
    let c = project_moments(c, &bps, r - 1);
    let mut pieces = vec![Piece::zero()];
    pieces.extend(c.iter().map(|&v| Piece::constant(v)));
    pieces.push(Piece::zero());
    let top = PiecewiseFunction::new(DomainKind::FullLine, bps, pieces)?;
    let f = top.repeated_integral(r)?;
    let f = f.with_constant_tail(1e-9)?;
    let d0 = by_representation(&f, k, r, 0.0)?.abs();
    let n0 = f.sup_norm()?;
    let nr = top.lp_norm(s)?;
    Ok(d0 / (n0.powf(mu) * nr.powf(lambda)))
}

/// Removes from the cell values `c` their components along the moments
/// `int t^j` over the cells, `j < m`, so that `f` stays bounded.
fn project_moments(c: &[f64], bps: &[f64], m: usize) -> Vec<f64> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    for j in 0..m {
        let e = (j + 1) as i32;
        let mut v: Vec<f64> = bps.windows(2).map(|w| (w[1].powi(e) - w[0].powi(e)) / e as f64).collect();
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    let mut out = c.to_vec();
    for b in &basis {
        let d: f64 = out.iter().zip(b).map(|(x, y)| x * y).sum();
        out.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
    }
    out
}
