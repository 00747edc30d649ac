//! Piecewise functions, norms, measures and serialization.

use approx::assert_relative_eq;
use fracineq::funcmodel::{DomainKind, Func, NormSpec, Piece, PiecewiseFunction, StieltjesMeasure};
use proptest::prelude::*;

fn hat() -> PiecewiseFunction {
    PiecewiseFunction::new(
        DomainKind::FullLine,
        vec![-1.0, 0.0, 1.0],
        vec![
            Piece::zero(),
            Piece::poly(-1.0, vec![0.0, 1.0]),
            Piece::poly(0.0, vec![1.0, -1.0]),
            Piece::zero(),
        ],
    )
    .unwrap()
}

#[test]
fn evaluation_and_limits() {
    let f = hat();
    assert_eq!(f.eval(-2.0), 0.0);
    assert_eq!(f.eval(-0.5), 0.5);
    assert_eq!(f.eval(0.0), 1.0);
    assert_eq!(f.eval(0.25), 0.75);
    assert_eq!(f.right_constant(), Some(0.0));
}

#[test]
fn norms_of_the_hat() {
    let f = hat();
    assert_relative_eq!(f.sup_norm().unwrap(), 1.0, epsilon = 1e-12);
    assert_relative_eq!(f.lp_norm(NormSpec::Finite(1.0)).unwrap(), 1.0, epsilon = 1e-12);
    assert_relative_eq!(f.lp_norm(NormSpec::Finite(2.0)).unwrap(), (2.0f64 / 3.0).sqrt(), epsilon = 1e-12);
    // The derivative jumps by -2 at 0, so the second derivative is a measure of mass 4.
    let norm = Func::from(f.clone()).derivative_norm(2, NormSpec::Finite(1.0)).unwrap();
    assert_relative_eq!(norm, 4.0, epsilon = 1e-12);
    assert!(Func::from(f).derivative_norm(2, NormSpec::Finite(2.0)).is_err());
}

#[test]
fn derivative_and_antiderivative_round_trip() {
    let f = hat();
    let g = f.antiderivative().unwrap().derivative();
    for x in [-0.7, -0.1, 0.4, 0.99] {
        assert_relative_eq!(g.eval(x), f.eval(x), epsilon = 1e-14);
    }
    assert_relative_eq!(f.integral().unwrap(), 1.0, epsilon = 1e-14);
}

#[test]
fn validation_errors() {
    assert!(PiecewiseFunction::new(DomainKind::FullLine, vec![1.0, 0.0], vec![Piece::zero(); 3]).is_err());
    assert!(PiecewiseFunction::new(DomainKind::FullLine, vec![0.0], vec![Piece::zero()]).is_err());
    assert!(PiecewiseFunction::new(
        DomainKind::FullLine,
        vec![0.0],
        vec![Piece::poly(0.0, vec![0.0, 1.0]), Piece::zero()]
    )
    .is_err());
    assert!(PiecewiseFunction::new(DomainKind::HalfLine, vec![-1.0], vec![Piece::zero(); 2]).is_err());
}

#[test]
fn json_round_trip() {
    let f = hat();
    let text = serde_json::to_string(&f).unwrap();
    let back: PiecewiseFunction = serde_json::from_str(&text).unwrap();
    assert_eq!(f.breakpoints(), back.breakpoints());
    for j in 0..=40 {
        let x = -2.0 + 0.1 * j as f64;
        assert_eq!(f.eval(x), back.eval(x));
    }
}

#[test]
fn norm_spec_parsing() {
    for s in ["inf", "Infinity", "\u{221e}", " INF "] {
        assert_eq!(s.parse::<NormSpec>().unwrap(), NormSpec::Infinite);
    }
    assert_eq!("2.5".parse::<NormSpec>().unwrap(), NormSpec::Finite(2.5));
    assert!("0.5".parse::<NormSpec>().is_err());
    assert!("abc".parse::<NormSpec>().is_err());
    assert_eq!(NormSpec::Finite(1.0).conjugate(), NormSpec::Infinite);
    assert_eq!(NormSpec::Finite(4.0).conjugate(), NormSpec::Finite(4.0 / 3.0));
}

#[test]
fn domain_parsing() {
    assert_eq!("r+".parse::<DomainKind>().unwrap(), DomainKind::HalfLine);
    assert_eq!("r".parse::<DomainKind>().unwrap(), DomainKind::FullLine);
    assert!("z".parse::<DomainKind>().is_err());
}

#[test]
fn measure_of_a_step() {
    let omega = PiecewiseFunction::new(
        DomainKind::FullLine,
        vec![0.0, 1.0],
        vec![Piece::zero(), Piece::constant(2.0), Piece::constant(-1.0)],
    )
    .unwrap();
    let mu = StieltjesMeasure::from_bv(&omega).unwrap();
    assert_relative_eq!(mu.total_variation().unwrap(), 5.0, epsilon = 1e-14);
    assert_relative_eq!(mu.total_mass().unwrap(), -1.0, epsilon = 1e-14);
    // int f d omega = 2 f(0) - 3 f(1).
    let v = mu.integrate(&Func::from(hat())).unwrap();
    assert_relative_eq!(v, 2.0, epsilon = 1e-14);
}

#[test]
fn steklov_average_of_a_constant_tail() {
    let f = PiecewiseFunction::indicator(DomainKind::FullLine, 0.0, 1.0).unwrap();
    let g = f.steklov_average(0.5).unwrap();
    assert_relative_eq!(g.integral().unwrap(), 1.0, epsilon = 1e-13);
    assert!(g.sup_norm().unwrap() <= 1.0 + 1e-14);
}

proptest! {
    #[test]
    fn dilation_scales_norms(h in 0.1f64..10.0, amp in -3.0f64..3.0, p in 1.0f64..6.0) {
        let f = hat();
        let g = f.dilated(h, amp).unwrap();
        let norm = NormSpec::Finite(p);
        let expected = amp.abs() * h.powf(1.0 / p) * f.lp_norm(norm).unwrap();
        prop_assert!((g.lp_norm(norm).unwrap() - expected).abs() <= 1e-10 * (1.0 + expected));
        prop_assert!((g.sup_norm().unwrap() - amp.abs()).abs() <= 1e-12);
    }

    #[test]
    fn json_round_trip_random_polynomials(c in proptest::collection::vec(-5.0f64..5.0, 1..5), b in 0.1f64..3.0) {
        let f = PiecewiseFunction::new(
            DomainKind::HalfLine,
            vec![b],
            vec![Piece::poly(0.0, c), Piece::constant(1.0)],
        ).unwrap();
        let back: PiecewiseFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(f, back);
    }
}
