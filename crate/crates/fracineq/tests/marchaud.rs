//! Marchaud and Hadamard derivatives against the power rule
//! `D^k (a - x)_+^j = Gamma(j + 1) / Gamma(j + 1 - k) (a - x)_+^(j - k)`.

use approx::assert_relative_eq;
use fracineq::funcmodel::{DomainKind, Piece, PiecewiseFunction};
use fracineq::marchaud::{by_definition, by_representation, hadamard_derivative, LeftExpansion};
use fracineq::special::gamma;

/// `(a - x)^j` on `[0, a]`, zero beyond.
fn falling_power(a: f64, j: usize) -> PiecewiseFunction {
    let mut coeffs = vec![0.0; j + 1];
    coeffs[j] = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    PiecewiseFunction::new(DomainKind::HalfLine, vec![a], vec![Piece::poly(a, coeffs), Piece::zero()]).unwrap()
}

fn power_rule(a: f64, j: usize, k: f64, x: f64) -> f64 {
    let jf = j as f64;
    gamma(jf + 1.0).unwrap() / gamma(jf + 1.0 - k).unwrap() * (a - x).max(0.0).powf(jf - k)
}

#[test]
fn representation_matches_power_rule() {
    for &(j, k, r) in &[(1, 0.3, 1), (1, 0.7, 1), (2, 0.5, 2), (2, 1.4, 2), (3, 1.7, 2), (3, 2.5, 3)] {
        let f = falling_power(1.5, j);
        for x in [0.0, 0.4, 1.1, 1.49] {
            let v = by_representation(&f, k, r, x).unwrap();
            assert_relative_eq!(v, power_rule(1.5, j, k, x), max_relative = 1e-9, epsilon = 1e-12);
        }
    }
}

#[test]
fn definition_matches_power_rule_for_every_n() {
    for &(j, k) in &[(1, 0.4f64), (2, 0.6), (2, 1.3), (3, 1.8)] {
        let f = falling_power(1.0, j);
        for n in (k.floor() as usize + 1)..=4 {
            for x in [0.0, 0.35, 0.8] {
                let v = by_definition(&f, k, n, x).unwrap();
                assert_relative_eq!(v, power_rule(1.0, j, k, x), max_relative = 1e-8, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn derivative_vanishes_beyond_support() {
    let f = falling_power(1.0, 2);
    assert_eq!(by_representation(&f, 0.5, 2, 1.5).unwrap(), 0.0);
}

#[test]
fn bad_orders_are_rejected() {
    let f = falling_power(1.0, 2);
    assert!(by_representation(&f, 1.0, 2, 0.0).is_err());
    assert!(by_representation(&f, 2.5, 2, 0.0).is_err());
    assert!(by_definition(&f, 1.5, 1, 0.0).is_err());
}

#[test]
fn left_expansion_matches_direct_evaluation() {
    // A C^1 bump on the line: (1 - x^2)^2 on [-1, 1].
    let bump = PiecewiseFunction::new(
        DomainKind::FullLine,
        vec![-1.0, 1.0],
        vec![Piece::zero(), Piece::poly(0.0, vec![1.0, 0.0, -2.0, 0.0, 1.0]), Piece::zero()],
    )
    .unwrap();
    for &(k, r) in &[(0.5, 2), (1.5, 2)] {
        let exp = LeftExpansion::new(&bump, k, r).unwrap();
        let x0 = exp.valid_below();
        for x in [x0, x0 - 1.0, x0 - 7.5] {
            let direct = by_representation(&bump, k, r, x).unwrap();
            assert_relative_eq!(exp.eval(x), direct, max_relative = 1e-8, epsilon = 1e-13);
        }
    }
}

/// Hadamard power rule: `D^k (ln(a/x))_+^j = Gamma(j+1)/Gamma(j+1-k) (ln(a/x))_+^(j-k)`.
#[test]
fn hadamard_matches_logarithmic_power_rule() {
    let a: f64 = 3.0;
    for &(j, k, n) in &[(1, 0.4, 1), (1, 0.4, 2), (2, 0.8, 1), (2, 1.3, 2), (2, 1.3, 3)] {
        let f = |x: f64| if x < a { (a / x).ln().powi(j) } else { 0.0 };
        for x in [0.05, 0.5, 1.0, 2.9] {
            let v = hadamard_derivative(f, &[a], 0.0, k, n, x).unwrap();
            let jf = j as f64;
            let expected = gamma(jf + 1.0).unwrap() / gamma(jf + 1.0 - k).unwrap() * (a / x).ln().powf(jf - k);
            assert_relative_eq!(v, expected, max_relative = 1e-8);
        }
    }
}

#[test]
fn hadamard_rejects_non_positive_points() {
    assert!(hadamard_derivative(|_| 0.0, &[1.0], 0.0, 0.5, 1, 0.0).is_err());
}
