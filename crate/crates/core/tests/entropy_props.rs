use std::f64::consts::PI;

use nodalsym::elementary::ipi;
use nodalsym::entropy::{
    entropy_g, g_gamma, h_fn, norm_sq, u_theta, GammaParams, ThetaFamily,
};
use nodalsym::quad::{QuadConfig, RuleKind};
use nodalsym::{Box2, Interval};
use proptest::prelude::*;

fn g_cfg() -> QuadConfig {
    QuadConfig::new(7, 1e-4, RuleKind::Simpson)
}

fn g_at(theta: Interval) -> Interval {
    entropy_g(&ThetaFamily::new(theta).unwrap(), &g_cfg()).unwrap()
}

fn grid() -> Vec<Interval> {
    (0..16).map(|k| ThetaFamily::pi_frac(k, 8).unwrap().theta()).collect()
}

#[test]
fn u_theta_is_normalized() {
    let cfg = QuadConfig::new(6, 1e-6, RuleKind::Simpson);
    for theta in grid() {
        let n = norm_sq(&ThetaFamily::new(theta).unwrap(), &cfg).unwrap();
        assert!(n.contains(0.25), "θ = {theta}: {n}");
    }
}

#[test]
fn g_is_symmetric_about_the_diagonal() {
    let pi4 = ipi() / 4.0;
    for t in [0.05, 0.1, 0.2] {
        let (a, b) = (g_at(pi4 + t), g_at(pi4 - t));
        assert!(a.intersect(&b).is_some(), "t = {t}: {a} vs {b}");
    }
}

#[test]
fn g_has_period_half_pi() {
    let half = ipi() / 2.0;
    for theta in grid().into_iter().take(6) {
        let (a, b) = (g_at(theta), g_at(theta + half));
        assert!(a.intersect(&b).is_some(), "θ = {theta}: {a} vs {b}");
    }
}

#[test]
fn g_is_even() {
    let t = Interval::point(0.3);
    assert!(g_at(t).intersect(&g_at(-t)).is_some());
}

/// `u_0 = φ₁` separates, and `∫₀¹ sin²(πx) log sin(πx) dx = (1 − 2 log 2)/4`.
#[test]
fn g_at_zero_matches_closed_form() {
    let exact = (2.0 * 2f64.ln() - 1.0) / 4.0;
    let g = entropy_g(&ThetaFamily::new(Interval::ZERO).unwrap(), &QuadConfig::new(9, 1e-6, RuleKind::Simpson)).unwrap();
    assert!(g.lo() <= exact && exact <= g.hi() && g.width() < 1e-4, "{g} vs {exact}");
}

#[test]
fn diagonal_value_is_below_the_axis_value() {
    let g0 = g_at(Interval::ZERO);
    let g4 = g_at(ipi() / 4.0);
    assert!(g4.hi() < g0.lo(), "{g4} vs {g0}");
}

#[test]
fn h_is_positive_near_the_diagonal() {
    let h = h_fn(&ThetaFamily::pi_over(4).unwrap(), &QuadConfig::new(6, 1e-3, RuleKind::Midpoint)).unwrap();
    assert!(h.lo() > 0.25, "{h}");
}

#[test]
fn g_gamma_at_zero_gamma_is_closed_form() {
    let gp = GammaParams::new(Interval::ZERO).unwrap();
    let fam = ThetaFamily::pi_over(6).unwrap();
    let v = g_gamma(&fam, &gp, &g_cfg()).unwrap();
    // (3/2) sin²(π/6) − 2 = 3/8 − 2
    assert!(v.contains(-1.625) && v.width() < 1e-14, "{v:?}");
}

#[test]
fn wide_theta_families_are_rejected() {
    assert!(ThetaFamily::new(Interval::new(0.0, 2.0).unwrap()).is_err());
    assert!(ThetaFamily::pi_over(0).is_err());
    assert!(ThetaFamily::new(Interval::new(0.0, f64::INFINITY).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn u_theta_contains_point_values(theta in -4.0f64..4.0, w in 0.0f64..0.1,
                                     x in 0.0f64..1.0, y in 0.0f64..1.0, hx in 0.0f64..0.2, hy in 0.0f64..0.2) {
        let fam = ThetaFamily::new(Interval::new(theta, theta + w).unwrap()).unwrap();
        let b = Box2::new(Interval::new(x, x + hx).unwrap(), Interval::new(y, y + hy).unwrap());
        let u = u_theta(&fam, &b);
        for (t, px, py) in [(theta, x, y), (theta + w, x + hx, y + hy), (theta + w / 2.0, x + hx / 3.0, y)] {
            let v = (PI * px).sin() * (2.0 * PI * py).sin() * t.cos() - (2.0 * PI * px).sin() * (PI * py).sin() * t.sin();
            prop_assert!(u.lo() - 1e-12 <= v && v <= u.hi() + 1e-12, "{:?} misses {}", u, v);
        }
    }

    #[test]
    fn g_enclosures_nest_with_precision(k in 0i64..8) {
        let fam = ThetaFamily::pi_frac(k, 16).unwrap();
        let coarse = entropy_g(&fam, &QuadConfig::new(4, 1e-2, RuleKind::Simpson)).unwrap();
        let fine = entropy_g(&fam, &QuadConfig::new(6, 1e-3, RuleKind::Simpson)).unwrap();
        prop_assert!(coarse.intersect(&fine).is_some());
        prop_assert!(fine.width() <= coarse.width());
    }
}
