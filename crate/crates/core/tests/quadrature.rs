mod common;

use common::{convergence_ratio, phi1_sq};
use nodalsym::quad::{integ, integ_detailed, rule_midpoint, rule_simpson, BoxCorners, IntegrandSpec, QuadConfig, RuleKind};
use nodalsym::Interval;
use proptest::prelude::*;

#[test]
fn phi1_squared_has_mean_one_quarter() {
    for rule in [RuleKind::Basic, RuleKind::Midpoint, RuleKind::Simpson] {
        let v = integ(&phi1_sq(), &QuadConfig::new(5, 1e-6, rule)).unwrap();
        assert!(v.contains(0.25), "{rule}: {v}");
    }
}

#[test]
fn convergence_orders() {
    let basic = convergence_ratio(RuleKind::Basic);
    let mid = convergence_ratio(RuleKind::Midpoint);
    let simpson = convergence_ratio(RuleKind::Simpson);
    println!("ratios: basic {basic}, midpoint {mid}, simpson {simpson}");
    assert!((0.4..=0.65).contains(&basic), "basic {basic}");
    assert!((0.2..=0.35).contains(&mid), "midpoint {mid}");
    assert!((0.04..=0.12).contains(&simpson), "simpson {simpson}");
}

fn ulps_apart(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

fn quadratic() -> IntegrandSpec {
    IntegrandSpec::new(|b| b.x.sqr() + b.y.sqr()).with_deriv2(|_| (Interval::point(2.0), Interval::point(2.0)))
}

#[test]
fn midpoint_on_quadratic_is_one_third_to_two_thirds() {
    let (enc, err) = rule_midpoint(&quadratic(), &BoxCorners::unit());
    assert!(ulps_apart(err, 1.0 / 6.0) <= 1, "err {err:e}");
    assert!(err >= 1.0 / 6.0);
    assert!(ulps_apart(enc.lo(), 1.0 / 3.0) <= 4 && ulps_apart(enc.hi(), 2.0 / 3.0) <= 4, "{enc:?}");
}

#[test]
fn simpson_is_exact_on_cubics() {
    let f = IntegrandSpec::new(|b| (b.x.sqr() * b.x) * (b.y.sqr() * b.y))
        .with_deriv4(|_| (Interval::ZERO, Interval::ZERO));
    let (enc, err) = rule_simpson(&f, &BoxCorners::unit());
    assert!(enc.contains(0.0625), "{enc:?}");
    assert!(enc.width() <= 1e-12 && err <= 1e-12);
}

#[test]
fn depth_limited_midpoint_on_quadratic() {
    let v = integ(&quadratic(), &QuadConfig::new(6, 1e-8, RuleKind::Midpoint)).unwrap();
    assert!(v.contains(2.0 / 3.0) && v.width() <= 1e-4, "{v:?}");
}

#[test]
fn missing_derivatives_are_reported() {
    let f = IntegrandSpec::new(|b| b.x);
    assert!(integ(&f, &QuadConfig::new(3, 1e-3, RuleKind::Simpson)).is_err());
    assert!(integ(&f, &QuadConfig::new(3, 1e-3, RuleKind::Basic)).is_ok());
}

#[test]
fn leaf_log_tiles_the_square() {
    let out = integ_detailed(&phi1_sq(), &QuadConfig::new(4, 1e-3, RuleKind::Simpson), true).unwrap();
    let log = out.log.unwrap();
    let area: f64 = log.cells.iter().map(|c| c.x.width() * c.y.width()).sum();
    assert!((area - 1.0).abs() < 1e-9, "{area}");
    assert_eq!(log.cells.len() as u64, out.stats.leaves());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// mean of a x² + b y² + c x y + d over the unit square is a/3 + b/3 + c/4 + d
    #[test]
    fn quadratic_means_are_enclosed(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0,
                                    depth in 0u32..5, rule in 0usize..3) {
        let f = IntegrandSpec::new(move |bx| bx.x.sqr() * a + bx.y.sqr() * b + bx.x * bx.y * c + d)
            .with_deriv2(move |_| (Interval::point(2.0 * a), Interval::point(2.0 * b)))
            .with_deriv4(|_| (Interval::ZERO, Interval::ZERO));
        let rule = [RuleKind::Basic, RuleKind::Midpoint, RuleKind::Simpson][rule];
        let v = integ(&f, &QuadConfig::new(depth, 1e-6, rule)).unwrap();
        let exact = a / 3.0 + b / 3.0 + c / 4.0 + d;
        prop_assert!(v.lo() <= exact + 1e-12 && v.hi() >= exact - 1e-12, "{:?} vs {}", v, exact);
    }

    #[test]
    fn deeper_never_loosens_the_basic_rule(depth in 0u32..6) {
        let f = phi1_sq();
        let a = integ(&f, &QuadConfig::new(depth, 1e-300, RuleKind::Basic)).unwrap();
        let b = integ(&f, &QuadConfig::new(depth + 1, 1e-300, RuleKind::Basic)).unwrap();
        prop_assert!(b.width() <= a.width() * (1.0 + 1e-9));
        prop_assert!(a.contains(0.25) && b.contains(0.25));
    }
}
