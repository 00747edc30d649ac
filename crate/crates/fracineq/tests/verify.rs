//! Random test functions and the batch checks.

use approx::assert_relative_eq;
use fracineq::analysis::{sharp_constant, ProblemSpec};
use fracineq::catalog::{build_case, CaseId};
use fracineq::funcmodel::{DomainKind, Func, NormSpec};
use fracineq::marchaud::by_definition;
use fracineq::verify::{
    batch_function, check_inequality, check_monotone_maximizer, check_relation8, default_test_spec, generate,
    inequality_ratio, relation8_sides, TestFunctionSpec,
};

fn recipe(domain: DomainKind, compact: bool, seed: u64) -> TestFunctionSpec {
    TestFunctionSpec { r: 2, domain, knot_count: 5, support: (0.25, 2.5), seed, compact }
}

#[test]
fn generation_is_reproducible() {
    let spec = recipe(DomainKind::FullLine, false, 11);
    let a = generate(&spec).unwrap();
    let b = generate(&spec).unwrap();
    for i in 0..50 {
        let x = -1.0 + 0.08 * i as f64;
        assert_eq!(a.eval(x), b.eval(x));
    }
    let c = generate(&recipe(DomainKind::FullLine, false, 12)).unwrap();
    assert!((0..50).any(|i| a.eval(0.3 + 0.04 * i as f64) != c.eval(0.3 + 0.04 * i as f64)));

    let p = ProblemSpec::for_case(CaseId::R2FulllineLow, 0.5, NormSpec::Infinite).unwrap();
    let f = batch_function(&p, 7, 3).unwrap();
    let g = batch_function(&p, 7, 3).unwrap();
    assert_eq!(f.eval(0.1), g.eval(0.1));
    assert_ne!(batch_function(&p, 7, 4).unwrap().eval(0.1), f.eval(0.1));
}

#[test]
fn generated_functions_have_the_requested_shape() {
    for seed in 0..20 {
        for (domain, compact) in [(DomainKind::HalfLine, false), (DomainKind::FullLine, false), (DomainKind::FullLine, true)] {
            let f = generate(&recipe(domain, compact, seed)).unwrap();
            let top = f.derivative_n(2);
            for x in [0.0, 0.1, 0.2, 2.6, 3.0, 10.0] {
                if domain == DomainKind::HalfLine || x > 0.0 {
                    assert_eq!(top.eval(x), 0.0, "f'' must vanish outside the support");
                }
            }
            // f'' is piecewise cubic with jumps, f' is continuous.
            assert!(f.derivative().max_relative_jump() < 1e-9);
            let tail = f.eval(3.0);
            assert_relative_eq!(f.eval(50.0), tail, epsilon = 1e-12);
            if domain == DomainKind::FullLine {
                assert_relative_eq!(f.eval(-5.0), f.eval(-50.0), epsilon = 1e-12);
            }
            if compact {
                assert!(tail.abs() < 1e-10 && f.eval(-5.0).abs() < 1e-10);
                assert!(f.lp_norm(NormSpec::Finite(1.0)).unwrap().is_finite());
            }
        }
    }
}

#[test]
fn invalid_recipes_are_rejected() {
    let mut spec = recipe(DomainKind::HalfLine, false, 0);
    spec.support = (-1.0, 1.0);
    assert!(generate(&spec).is_err());
    spec.support = (1.0, 1.0);
    assert!(generate(&spec).is_err());
    spec.support = (0.0, 1.0);
    spec.r = 0;
    assert!(generate(&spec).is_err());
}

#[test]
fn default_recipe_follows_the_problem() {
    let p = ProblemSpec::for_case(CaseId::SteinR1, 0.5, NormSpec::Finite(1.0)).unwrap();
    for seed in 0..30 {
        let t = default_test_spec(&p, seed);
        assert_eq!(t.r, 1);
        assert!(t.compact);
        assert!(t.support.0 < t.support.1);
    }
}

/// The left side of the dual representation recomputed with the
/// finite-difference definition instead of the derivative representation.
#[test]
fn relation_sides_agree_with_the_definition() {
    for case in [CaseId::R1Halfline, CaseId::R2HalflineLow, CaseId::R2FulllineHigh] {
        let k = if case == CaseId::R2FulllineHigh { 1.5 } else { 0.4 };
        let pair = build_case(case, k, NormSpec::Infinite, 1.0).unwrap();
        let (p, q) = case.pq();
        let spec = ProblemSpec::new(case.domain(), k, case.r(), p, q, NormSpec::Infinite).unwrap();
        for i in 0..5 {
            let f = batch_function(&spec, 3, i).unwrap();
            let (lhs, rhs) = relation8_sides(&pair, &f).unwrap();
            let def = by_definition(&f, k, case.r() + 1, 0.0).unwrap()
                - pair.measure.integrate(&Func::from(f.clone())).unwrap();
            assert_relative_eq!(lhs, def, epsilon = 1e-8, max_relative = 1e-8);
            assert_relative_eq!(lhs, rhs, epsilon = 1e-8, max_relative = 1e-8);
        }
    }
}

#[test]
fn batch_checks_pass_for_a_case() {
    let spec = ProblemSpec::for_case(CaseId::R2HalflineLow, 0.5, NormSpec::Finite(2.0)).unwrap();
    let report = check_inequality(&spec, 12, 1).unwrap();
    assert!(report.pass, "{report:?}");
    assert!(report.max_ratio <= 1.0 + 1e-6 && report.max_ratio > 0.0);
    assert_eq!(report.residuals.len(), 12);
    assert_eq!(check_inequality(&spec, 12, 1).unwrap(), report);

    let pair = build_case(CaseId::R2HalflineLow, 0.5, NormSpec::Finite(2.0), 1.0).unwrap();
    let rel = check_relation8(&pair, 8, 2).unwrap();
    assert!(rel.pass, "{rel:?}");
    let max = check_monotone_maximizer(&pair).unwrap();
    assert!(max.pass, "{max:?}");
}

#[test]
fn family_cases_report_the_ladder() {
    let spec = ProblemSpec::for_case(CaseId::SteinR1, 0.5, NormSpec::Finite(1.0)).unwrap();
    let report = check_inequality(&spec, 6, 0).unwrap();
    assert!(report.pass, "{report:?}");
    assert!(report.attained_fraction.unwrap() > 0.99);
    let pair = build_case(CaseId::SteinR1, 0.5, NormSpec::Finite(1.0), 1.0).unwrap();
    assert!(check_monotone_maximizer(&pair).is_err());
}

#[test]
fn extremal_function_has_unit_ratio() {
    let spec = ProblemSpec::for_case(CaseId::R2FulllineLow, 0.5, NormSpec::Infinite).unwrap();
    let res = sharp_constant(&spec).unwrap();
    let pair = build_case(CaseId::R2FulllineLow, 0.5, NormSpec::Infinite, 1.0).unwrap();
    let Ok(Func::Piecewise(phi)) = pair.phi_at(None) else { panic!("expected an exact piecewise function") };
    assert_relative_eq!(inequality_ratio(&res, &phi).unwrap(), 1.0, max_relative = 1e-8);
}
