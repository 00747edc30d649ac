//! Parameter solvers against closed forms and against the defining
//! integrals evaluated with an independent graded Gauss-Legendre rule.

use approx::assert_abs_diff_eq;
use fracineq::funcmodel::NormSpec;
use fracineq::solvers::{solve_equation_fullline_low, solve_system_fullline_high, solve_system_halfline_high};

const INF: NormSpec = NormSpec::Infinite;

/// Composite 5-point Gauss-Legendre rule on a mesh graded cubically towards `lo`.
fn gauss(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const X: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
    const W: [f64; 5] = [0.568_888_888_888_888_9, 0.478_628_670_499_366_5, 0.478_628_670_499_366_5, 0.236_926_885_056_189_1, 0.236_926_885_056_189_1];
    let n = 4000;
    let node = |j: usize| lo + (hi - lo) * (j as f64 / n as f64).powi(3);
    let mut total = 0.0;
    for j in 0..n {
        let (a, b) = (node(j), node(j + 1));
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        total += h * X.iter().zip(W).map(|(x, w)| w * f(m + h * x)).sum::<f64>();
    }
    total
}

/// The rule graded towards both ends of `[lo, hi]`.
fn gauss_both(f: impl Fn(f64) -> f64 + Copy, lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    gauss(f, lo, mid) + gauss(move |u| f(hi - u), 0.0, hi - mid)
}

/// Same rule with the mesh split at interior points where the integrand kinks.
fn gauss_split(f: impl Fn(f64) -> f64 + Copy, points: &[f64]) -> f64 {
    points.windows(2).map(|w| gauss_both(f, w[0], w[1])).sum()
}

fn signed_pow(x: f64, e: f64) -> f64 {
    x.abs().powf(e) * x.signum()
}

#[test]
fn half_line_high_closed_form() {
    for k in [1.1, 1.5, 1.9] {
        let sol = solve_system_halfline_high(k, INF).unwrap();
        assert_abs_diff_eq!(sol.a.unwrap(), 2f64.sqrt() - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.b, 0.5f64.sqrt(), epsilon = 1e-12);
    }
}

#[test]
fn line_low_closed_forms() {
    for j in 1..=9 {
        let k = 0.1 * j as f64;
        let p_inf = solve_equation_fullline_low(k, INF).unwrap().p.unwrap();
        assert_abs_diff_eq!(p_inf, 1.0 - 2f64.powf(-k / (1.0 - k)), epsilon = 1e-10);
        let p2 = solve_equation_fullline_low(k, NormSpec::Finite(2.0)).unwrap().p.unwrap();
        assert_abs_diff_eq!(p2, k / (2.0 - k), epsilon = 1e-10);
    }
}

#[test]
fn line_low_near_the_right_end_of_the_range() {
    for k in [0.82, 0.87, 0.93] {
        let p2 = solve_equation_fullline_low(k, NormSpec::Finite(2.0)).unwrap().p.unwrap();
        assert_abs_diff_eq!(p2, k / (2.0 - k), epsilon = 1e-10);
    }
}

#[test]
fn line_high_closed_form() {
    for k in [1.2, 1.5, 1.8] {
        let sol = solve_system_fullline_high(k, INF).unwrap();
        assert_abs_diff_eq!(sol.a.unwrap(), 1.0 / 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.b, 2.0 / 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.p.unwrap(), 1.0 / 3.0, epsilon = 1e-10);
    }
}

/// On the line with `k in (0, 1)`, `Phi' (1) = int_{-p}^1 tau_(s') = 0` where
/// `tau(x) = x_+^(1-k) - (x + p) / (1 + p)`.
#[test]
fn line_low_matches_independent_equation() {
    for &(k, s) in &[(0.3, 1.5), (0.5, 3.0), (0.7, 6.0)] {
        let e = 1.0 / (s - 1.0);
        let residual = |p: f64| {
            let raw = move |x: f64| x.max(0.0).powf(1.0 - k) - (x + p) / (1.0 + p);
            // tau < 0 just right of 0 and tau > 0 before 1; split at its zero.
            let (mut l, mut h) = (1e-300, 1.0 - 1e-9);
            for _ in 0..200 {
                let m = 0.5 * (l + h);
                if raw(m) < 0.0 {
                    l = m;
                } else {
                    h = m;
                }
            }
            let tau = move |x: f64| signed_pow(raw(x), e);
            gauss(tau, -p, 0.0) + gauss_both(tau, 0.0, l) + gauss_both(tau, l, 1.0)
        };
        // Bisection on [0, k / (1 - k)], where the residual changes sign once.
        let (mut lo, mut hi) = (0.0, k / (1.0 - k));
        let f_lo = residual(lo);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if residual(mid).signum() == f_lo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let sol = solve_equation_fullline_low(k, NormSpec::Finite(s)).unwrap();
        assert_abs_diff_eq!(sol.p.unwrap(), oracle, epsilon = 1e-7);
    }
}

/// Half-line with `k in (1, 2)`: `Phi'(1) = int_a^1 tau_(s') = 0` and
/// `Phi(0) = Phi(1)`, with `tau = x^(1-k) - omega^[1]`.
#[test]
fn half_line_high_matches_independent_equations() {
    for &(k, s) in &[(1.5, INF), (1.3, NormSpec::Finite(4.0)), (1.2, NormSpec::Finite(3.0))] {
        let sol = solve_system_halfline_high(k, s).unwrap();
        let (a, b) = (sol.a.unwrap(), sol.b);
        let c2 = (1.0 - b.powf(1.0 - k)) / (1.0 - b);
        let c1 = (1.0 - b - (1.0 - b.powf(1.0 - k)) * (1.0 - a)) / (a * (1.0 - b));
        let omega1 = move |x: f64| if x <= a { c1 * x } else { c1 * a + c2 * (x - a) };
        let e = match s {
            NormSpec::Infinite => 0.0,
            NormSpec::Finite(v) => 1.0 / (v - 1.0),
        };
        let tau = move |x: f64| {
            let t = x.powf(1.0 - k) - omega1(x);
            if e == 0.0 {
                t.signum()
            } else {
                signed_pow(t, e)
            }
        };
        let pts = [0.0, a, b, 1.0];
        let d1 = gauss_split(tau, &[a, b, 1.0]);
        let phi0 = gauss(move |t| 0.5 * t * tau(t), 0.0, a);
        let phi1 = gauss(move |t| (-1.0 + 0.5 * t) * tau(t), 0.0, a) + gauss_split(move |t| (1.0 - t) * tau(t), &pts);
        assert_abs_diff_eq!(d1, 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(phi0 - phi1, 0.0, epsilon = 1e-7);
    }
}

#[test]
fn residuals_are_reported() {
    let sol = solve_system_fullline_high(1.3, NormSpec::Finite(4.0)).unwrap();
    assert!(!sol.closed_form);
    assert!(sol.residuals.iter().all(|r| r.abs() < 1e-9));
}

#[test]
fn invalid_orders_are_rejected() {
    assert!(solve_system_halfline_high(0.5, INF).is_err());
    assert!(solve_system_halfline_high(1.6, NormSpec::Finite(2.0)).is_err());
    assert!(solve_equation_fullline_low(1.5, INF).is_err());
    assert!(solve_system_fullline_high(1.2, NormSpec::Finite(1.0)).is_err());
}
