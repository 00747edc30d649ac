//! Adaptive Gauss-Kronrod quadrature for the singular and semi-infinite
//! integrals that appear in the Marchaud derivative and in the duality
//! relations.
//!
//! Integrable endpoint singularities of known power type are removed by the
//! substitution `t = a + (b - a) u^m` with `m = 1 / (1 + alpha)`, where the
//! integrand behaves like `(t - a)^alpha` near `a`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

/// Gauss weights for the odd-indexed Kronrod nodes (the 10-point Gauss rule).
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Default absolute and relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

static TOL_OVERRIDE: AtomicU64 = AtomicU64::new(0);

/// Overrides the tolerance returned by [`QuadratureSpec::default`] for the
/// whole process. Non-positive or non-finite values restore the default.
pub fn set_default_tolerance(tol: f64) {
    let bits = if tol.is_finite() && tol > 0.0 { tol.to_bits() } else { 0 };
    TOL_OVERRIDE.store(bits, AtomicOrdering::Relaxed);
}

/// Current process-wide default tolerance.
pub fn default_tolerance() -> f64 {
    match TOL_OVERRIDE.load(AtomicOrdering::Relaxed) {
        0 => DEFAULT_TOL,
        bits => f64::from_bits(bits),
    }
}

/// Tolerances, subdivision budget and declared endpoint behaviour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Exponent `alpha` such that the integrand behaves like `(t - a)^alpha` at the left end.
    pub left_exponent: Option<f64>,
    /// Exponent `alpha` such that the integrand behaves like `(b - t)^alpha` at the right end.
    pub right_exponent: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        let tol = default_tolerance();
        Self {
            abs_tol: tol,
            rel_tol: tol,
            max_subdivisions: 2000,
            left_exponent: None,
            right_exponent: None,
        }
    }
}

impl QuadratureSpec {
    /// Spec with equal absolute and relative tolerance.
    pub fn with_tol(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    /// Declares the left-end exponent.
    pub fn left(mut self, alpha: f64) -> Self {
        self.left_exponent = Some(alpha);
        self
    }

    /// Declares the right-end exponent.
    pub fn right(mut self, alpha: f64) -> Self {
        self.right_exponent = Some(alpha);
        self
    }

    /// Same tolerances without endpoint declarations.
    pub fn plain(mut self) -> Self {
        self.left_exponent = None;
        self.right_exponent = None;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::Domain(
                "quadrature tolerances must be positive and the subdivision budget at least 1".into(),
            ));
        }
        for alpha in [self.left_exponent, self.right_exponent].into_iter().flatten() {
            if !(alpha > -1.0) {
                return Err(Error::Divergence(format!(
                    "endpoint exponent {alpha} is not integrable"
                )));
            }
        }
        Ok(())
    }
}

/// Result of a quadrature: value and error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[10];
    let mut gauss = 0.0;
    let mut resabs = fc.abs() * WGK[10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kron += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kron * half;
    let floor = 50.0 * f64::EPSILON * resabs * half.abs();
    let err = ((kron - gauss) * half).abs().max(floor);
    Segment {
        a,
        b,
        value,
        err: if err.is_nan() { f64::INFINITY } else { err },
        floor,
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    let first = kronrod(f, a, b);
    let mut value = first.value;
    let mut err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut count = 1;
    loop {
        if !value.is_finite() {
            return Err(Error::Divergence(format!(
                "integrand is not finite on [{a}, {b}]"
            )));
        }
        if err <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.err <= worst.floor * 1.000_001 || (worst.b - worst.a).abs() < 1e-15 * worst.a.abs().max(1e-300) {
            heap.push(worst);
            break;
        }
        if count >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                a,
                b,
                err,
                subdivisions: count,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod(f, worst.a, mid);
        let right = kronrod(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        count += 1;
        if count % 64 == 0 {
            value = heap.iter().map(|s| s.value).sum();
            err = heap.iter().map(|s| s.err).sum();
        }
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let err: f64 = heap.iter().map(|s| s.err).sum();
    Ok(Estimate { value, err })
}

/// Integrates `f` over `[a, b]`, honouring declared endpoint exponents.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("finite bounds required, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, err: 0.0 });
    }
    if a > b {
        let est = integrate_finite(f, b, a, &swap_ends(spec))?;
        return Ok(Estimate {
            value: -est.value,
            err: est.err,
        });
    }
    let left = spec.left_exponent.and_then(substitution_power);
    let right = spec.right_exponent.and_then(substitution_power);
    match (left, right) {
        (None, None) => adaptive(&f, a, b, spec),
        (Some(m), None) => left_substituted(&f, a, b, m, spec),
        (None, Some(m)) => right_substituted(&f, a, b, m, spec),
        (Some(ls), Some(rs)) => {
            let mid = 0.5 * (a + b);
            let half_spec = QuadratureSpec {
                abs_tol: 0.5 * spec.abs_tol,
                ..*spec
            };
            let l = left_substituted(&f, a, mid, ls, &half_spec)?;
            let r = right_substituted(&f, mid, b, rs, &half_spec)?;
            Ok(Estimate {
                value: l.value + r.value,
                err: l.err + r.err,
            })
        }
    }
}

fn swap_ends(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        left_exponent: spec.right_exponent,
        right_exponent: spec.left_exponent,
        ..*spec
    }
}

/// Power `m` of the substitution `x - a = w u^m` that regularises an
/// endpoint behaving like `(x - a)^alpha`.
///
/// Singular ends use `m = 1 / (1 + alpha)`, which makes the leading term
/// constant in `u`. Bounded ends with a fractional exponent use `m = 3`, which
/// turns them into `u^(3 alpha + 2)` with three bounded derivatives. Integer
/// exponents are already smooth.
fn substitution_power(alpha: f64) -> Option<Substitution> {
    if alpha < 0.0 {
        Some(Substitution { m: 1.0 / (1.0 + alpha), singular: true })
    } else if alpha.fract() != 0.0 {
        Some(Substitution { m: 3.0, singular: false })
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy)]
struct Substitution {
    m: f64,
    singular: bool,
}

/// Smallest `u` whose offset `w u^m` from the endpoint `e` is resolved.
///
/// Offsets below `delta = sqrt(eps |e| w)` lose relative accuracy when added
/// to `e`. The substituted integrand is flat to leading order there, so it is
/// held at its value at `delta`; this keeps the mass of the endpoint region
/// that rounding onto `e` would otherwise drop.
fn resolved_start(e: f64, w: f64, sub: Substitution) -> f64 {
    if !sub.singular {
        return 0.0;
    }
    let delta = (f64::EPSILON * e.abs() * w).sqrt();
    (delta / w).powf(1.0 / sub.m)
}

fn left_substituted<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, sub: Substitution, spec: &QuadratureSpec) -> Result<Estimate> {
    let w = b - a;
    let m = sub.m;
    let u_min = resolved_start(a, w, sub);
    let g = |u: f64| {
        let u = u.max(u_min);
        let um1 = u.powf(m - 1.0);
        let x = a + w * um1 * u;
        if x == a {
            return 0.0;
        }
        f(x) * w * m * um1
    };
    adaptive(&g, 0.0, 1.0, spec)
}

fn right_substituted<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, sub: Substitution, spec: &QuadratureSpec) -> Result<Estimate> {
    let w = b - a;
    let m = sub.m;
    let u_min = resolved_start(b, w, sub);
    let g = |u: f64| {
        let u = u.max(u_min);
        let um1 = u.powf(m - 1.0);
        let x = b - w * um1 * u;
        if x == b {
            return 0.0;
        }
        f(x) * w * m * um1
    };
    adaptive(&g, 0.0, 1.0, spec)
}

/// Integrates `f` over `[a, +inf)` for integrands decaying like `t^(-decay_exponent)`.
///
/// The tail is mapped to a finite interval by `t = c / u` with `c = max(a, 1)`;
/// the resulting endpoint behaviour `u^(decay_exponent - 2)` is declared to the
/// finite integrator.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay_exponent: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if !(decay_exponent > 1.0) {
        return Err(Error::Divergence(format!(
            "decay exponent {decay_exponent} does not make the tail integrable"
        )));
    }
    let c = a.max(1.0);
    check_decay(&f, c, decay_exponent)?;
    let head = if a < c {
        integrate_finite(&f, a, c, &QuadratureSpec { right_exponent: None, ..*spec })?
    } else {
        Estimate { value: 0.0, err: 0.0 }
    };
    let mapped = |u: f64| {
        let t = c / u;
        if !t.is_finite() {
            return 0.0;
        }
        f(t) * t * (t / c)
    };
    let tail_spec = QuadratureSpec {
        left_exponent: Some(decay_exponent - 2.0),
        right_exponent: None,
        ..*spec
    };
    let tail = integrate_finite(mapped, 0.0, 1.0, &tail_spec)?;
    Ok(Estimate {
        value: head.value + tail.value,
        err: head.err + tail.err,
    })
}

fn check_decay<F: Fn(f64) -> f64>(f: &F, c: f64, d: f64) -> Result<()> {
    let probe = |t: f64| f(t).abs() * t.powf(d);
    let near = probe(c * 1e3);
    let far = probe(c * 1e6);
    if far.is_finite() && near.is_finite() && far > 1e3 * near.max(1e-300) && far > 1e-12 {
        return Err(Error::Divergence(format!(
            "integrand decays more slowly than t^-{d}"
        )));
    }
    Ok(())
}

/// Integrates over consecutive panels `[points[i], points[i+1]]`, letting
/// `exponents(i)` declare the endpoint behaviour of panel `i`.
pub fn integrate_panels<F, E>(f: F, points: &[f64], exponents: E, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
    E: Fn(usize) -> (Option<f64>, Option<f64>),
{
    let mut total = Estimate { value: 0.0, err: 0.0 };
    let panels = points.len().saturating_sub(1).max(1);
    for (i, w) in points.windows(2).enumerate() {
        if w[1] <= w[0] {
            continue;
        }
        let (l, r) = exponents(i);
        let panel_spec = QuadratureSpec {
            abs_tol: spec.abs_tol / panels as f64,
            left_exponent: l,
            right_exponent: r,
            ..*spec
        };
        let est = integrate_finite(&f, w[0], w[1], &panel_spec)?;
        total.value += est.value;
        total.err += est.err;
    }
    Ok(total)
}
