//! The functions on the unit square whose minimization the prover certifies.
//!
//! `φ₁(x,y) = sin(πx) sin(2πy)` and `φ₂(x,y) = sin(2πx) sin(πy)` span the
//! second Dirichlet eigenspace. The family `u_θ = φ₁ cos θ − φ₂ sin θ` has
//! `∫u_θ² = 1/4`, and
//!
//! * `g(θ) = −∫ u_θ² log|u_θ|` is the entropy,
//! * `h(θ) = −∫ |∂_θ u_θ|² log|u_θ|` enters `g″(θ) = 2 (h(θ) − 1/4 − g(θ))`,
//! * `g_γ(θ) = (3/2) sin²θ − 2 + 5γ g(θ)` is the rectangle family.

use std::io::Write;
use std::sync::OnceLock;

use crate::elementary::{f_fourth, f_prime, f_second, f_third, icos, iexp, ilog, ipi, isin, x2logx};
use crate::error::{Error, Result};
use crate::interval::{Box2, Interval};
use crate::quad::{integ_detailed, Integrand, QuadConfig, QuadOutcome};

/// `π^k` and `(2π)^k` for `k = 0..=4`.
struct PiPowers {
    one: [Interval; 5],
    two: [Interval; 5],
}

fn pi_powers() -> &'static PiPowers {
    static P: OnceLock<PiPowers> = OnceLock::new();
    P.get_or_init(|| {
        let pi = ipi();
        let two_pi = pi * 2.0;
        let mut one = [Interval::ONE; 5];
        let mut two = [Interval::ONE; 5];
        for k in 1..5 {
            one[k] = one[k - 1] * pi;
            two[k] = two[k - 1] * two_pi;
        }
        PiPowers { one, two }
    })
}

/// A parameter interval `θ` of the family `u_θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaFamily {
    theta: Interval,
}

impl ThetaFamily {
    pub fn new(theta: Interval) -> Result<Self> {
        if !theta.is_bounded() {
            return Err(Error::Unbounded("theta"));
        }
        if theta.width() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Config(format!("theta interval {theta} is wider than π/2")));
        }
        Ok(ThetaFamily { theta })
    }

    /// `θ = π / k`.
    pub fn pi_over(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("θ = π/0 is undefined".into()));
        }
        ThetaFamily::new(ipi() / k as f64)
    }

    /// `θ = p π / q`.
    pub fn pi_frac(p: i64, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::Config("zero denominator in θ = pπ/q".into()));
        }
        // p and q are exact below 2^53
        ThetaFamily::new(ipi() * p as f64 / q as f64)
    }

    pub fn theta(&self) -> Interval {
        self.theta
    }

    fn data(&self) -> ThetaData {
        let th = self.theta;
        let mid = Interval::point(th.midpoint());
        ThetaData {
            cos: icos(th),
            sin: isin(th),
            cos_m: icos(mid),
            sin_m: isin(mid),
            dtheta: th - mid,
            thin: th.is_thin(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct ThetaData {
    cos: Interval,
    sin: Interval,
    cos_m: Interval,
    sin_m: Interval,
    dtheta: Interval,
    thin: bool,
}

impl ThetaData {
    /// `cos θ · a − sin θ · b` over the whole θ interval.
    fn u(&self, a: Interval, b: Interval) -> Interval {
        self.cos * a - self.sin * b
    }

    /// `∂_θ` of [`Self::u`].
    fn w(&self, a: Interval, b: Interval) -> Interval {
        -(self.sin * a) - self.cos * b
    }

    /// `u` intersected with its mean-value form around the midpoint of θ.
    fn u_tight(&self, a: Interval, b: Interval) -> Interval {
        let naive = self.u(a, b);
        if self.thin {
            return naive;
        }
        let centred = self.cos_m * a - self.sin_m * b + self.w(a, b) * self.dtheta;
        naive.intersect(&centred).unwrap_or(naive)
    }
}

/// `sin(πt)`, `sin(2πt)`, `cos(πt)`, `cos(2πt)` along one axis.
struct Axis {
    s1: Interval,
    s2: Interval,
    c1: Interval,
    c2: Interval,
}

impl Axis {
    fn sines(t: Interval) -> (Interval, Interval) {
        let p = pi_powers();
        (isin(p.one[1] * t), isin(p.two[1] * t))
    }

    fn new(t: Interval) -> Self {
        let p = pi_powers();
        let a1 = p.one[1] * t;
        let a2 = p.two[1] * t;
        Axis {
            s1: isin(a1),
            s2: isin(a2),
            c1: icos(a1),
            c2: icos(a2),
        }
    }

    /// `∂_t^k sin(πt)` (`double = false`) or `∂_t^k sin(2πt)`.
    fn deriv(&self, k: usize, double: bool) -> Interval {
        let p = pi_powers();
        let (s, c, scale) = if double {
            (self.s2, self.c2, p.two[k])
        } else {
            (self.s1, self.c1, p.one[k])
        };
        let d = match k % 4 {
            0 => s,
            1 => c,
            2 => -s,
            _ => -c,
        };
        scale * d
    }
}

/// Partial derivatives of `φ₁` and `φ₂` of orders `0..=order` along one axis.
struct Partials {
    p1: [Interval; 5],
    p2: [Interval; 5],
}

fn partials_x(ax: &Axis, ay: &Axis, order: usize) -> Partials {
    let mut p1 = [Interval::ZERO; 5];
    let mut p2 = [Interval::ZERO; 5];
    for k in 0..=order {
        p1[k] = ax.deriv(k, false) * ay.s2;
        p2[k] = ax.deriv(k, true) * ay.s1;
    }
    Partials { p1, p2 }
}

fn partials_y(ax: &Axis, ay: &Axis, order: usize) -> Partials {
    let mut p1 = [Interval::ZERO; 5];
    let mut p2 = [Interval::ZERO; 5];
    for k in 0..=order {
        p1[k] = ax.s1 * ay.deriv(k, true);
        p2[k] = ax.s2 * ay.deriv(k, false);
    }
    Partials { p1, p2 }
}

/// `(φ₁, φ₂)` over a box.
fn modes(b: &Box2) -> (Interval, Interval) {
    let (x1, x2) = Axis::sines(b.x);
    let (y1, y2) = Axis::sines(b.y);
    (x1 * y2, x2 * y1)
}

/// Enclosure of `u_θ` on `b × θ`.
pub fn u_theta(fam: &ThetaFamily, b: &Box2) -> Interval {
    let (p1, p2) = modes(b);
    fam.data().u_tight(p1, p2)
}

fn check_order(k: usize) -> Result<()> {
    if !(1..=4).contains(&k) {
        return Err(Error::Config(format!("derivative order must be 1..=4, got {k}")));
    }
    Ok(())
}

/// `∂x^k u_θ` on `b × θ`, `k ∈ 1..=4`.
pub fn du_dx(fam: &ThetaFamily, b: &Box2, k: usize) -> Result<Interval> {
    check_order(k)?;
    let p = partials_x(&Axis::new(b.x), &Axis::new(b.y), k);
    Ok(fam.data().u(p.p1[k], p.p2[k]))
}

/// `∂y^k u_θ` on `b × θ`, `k ∈ 1..=4`.
pub fn du_dy(fam: &ThetaFamily, b: &Box2, k: usize) -> Result<Interval> {
    check_order(k)?;
    let p = partials_y(&Axis::new(b.x), &Axis::new(b.y), k);
    Ok(fam.data().u(p.p1[k], p.p2[k]))
}

/// `∂_θ u_θ = −φ₁ sin θ − φ₂ cos θ` on `b × θ`.
pub fn du_dtheta(fam: &ThetaFamily, b: &Box2) -> Interval {
    let (p1, p2) = modes(b);
    fam.data().w(p1, p2)
}

/// `−u_θ² log|u_θ|` with chain-rule derivative bounds.
pub struct EntropyIntegrand {
    th: ThetaData,
}

impl EntropyIntegrand {
    pub fn new(fam: &ThetaFamily) -> Self {
        EntropyIntegrand { th: fam.data() }
    }

    /// `(u, u', u'', …)` along one axis, with `u` in its tight form.
    fn jets(&self, p: &Partials, order: usize) -> [Interval; 5] {
        let mut j = [Interval::ZERO; 5];
        j[0] = self.th.u_tight(p.p1[0], p.p2[0]);
        for k in 1..=order {
            j[k] = self.th.u(p.p1[k], p.p2[k]);
        }
        j
    }

    fn second(j: &[Interval; 5]) -> Interval {
        let u = j[0];
        -(f_second(u) * j[1].sqr() + f_prime(u) * j[2])
    }

    fn fourth(j: &[Interval; 5]) -> Interval {
        let [u, u1, u2, u3, u4] = *j;
        let u1sq = u1.sqr();
        let t4 = f_fourth(u) * u1sq.sqr();
        let t3 = f_third(u) * u1sq * u2 * 6.0;
        let t2 = f_second(u) * (u2.sqr() * 3.0 + u1 * u3 * 4.0);
        let t1 = f_prime(u) * u4;
        -(t4 + t3 + t2 + t1)
    }

    fn derivs(&self, b: &Box2, order: usize, combine: fn(&[Interval; 5]) -> Interval) -> (Interval, Interval) {
        let ax = Axis::new(b.x);
        let ay = Axis::new(b.y);
        let jx = self.jets(&partials_x(&ax, &ay, order), order);
        if jx[0].contains_zero() {
            // u² log|u| is not smooth across u = 0
            return (Interval::ENTIRE, Interval::ENTIRE);
        }
        let jy = self.jets(&partials_y(&ax, &ay, order), order);
        (combine(&jx), combine(&jy))
    }
}

impl Integrand for EntropyIntegrand {
    fn value(&self, b: &Box2) -> Interval {
        let (p1, p2) = modes(b);
        -x2logx(self.th.u_tight(p1, p2))
    }

    fn deriv2(&self, b: &Box2) -> Option<(Interval, Interval)> {
        Some(self.derivs(b, 2, Self::second))
    }

    fn deriv4(&self, b: &Box2) -> Option<(Interval, Interval)> {
        Some(self.derivs(b, 4, Self::fourth))
    }
}

/// `−|∂_θ u_θ|² log|u_θ|` with second-derivative bounds.
pub struct HIntegrand {
    th: ThetaData,
}

impl HIntegrand {
    pub fn new(fam: &ThetaFamily) -> Self {
        HIntegrand { th: fam.data() }
    }

    /// `∂²(w² log|u|)` from `(u, u', u'')` and `(w, w', w'')` along one axis.
    fn second(&self, p: &Partials) -> Interval {
        let u = self.th.u_tight(p.p1[0], p.p2[0]);
        let (u1, u2) = (self.th.u(p.p1[1], p.p2[1]), self.th.u(p.p1[2], p.p2[2]));
        let (w, w1, w2) = (
            self.th.w(p.p1[0], p.p2[0]),
            self.th.w(p.p1[1], p.p2[1]),
            self.th.w(p.p1[2], p.p2[2]),
        );
        let log_u = ilog(u.abs()).unwrap_or(Interval::ENTIRE);
        let a = (w1.sqr() + w * w2) * log_u * 2.0;
        let b = (w * w1 * u1 * 4.0).div_extended(&u);
        let c = (w.sqr() * (u2 * u - u1.sqr())).div_extended(&u.sqr());
        -(a + b + c)
    }
}

impl Integrand for HIntegrand {
    fn value(&self, b: &Box2) -> Interval {
        let (p1, p2) = modes(b);
        let u = self.th.u_tight(p1, p2).abs();
        let w2 = self.th.w(p1, p2).sqr();
        match ilog(u) {
            Ok(l) => -(w2 * l),
            // u vanishes identically on the box
            Err(_) => Interval::raw(0.0, f64::INFINITY),
        }
    }

    fn deriv2(&self, b: &Box2) -> Option<(Interval, Interval)> {
        let ax = Axis::new(b.x);
        let ay = Axis::new(b.y);
        let px = partials_x(&ax, &ay, 2);
        if self.th.u_tight(px.p1[0], px.p2[0]).contains_zero() {
            return Some((Interval::ENTIRE, Interval::ENTIRE));
        }
        let py = partials_y(&ax, &ay, 2);
        Some((self.second(&px), self.second(&py)))
    }
}

/// `u_θ²`, whose integral is `1/4` for every θ.
pub struct NormIntegrand {
    th: ThetaData,
}

impl NormIntegrand {
    pub fn new(fam: &ThetaFamily) -> Self {
        NormIntegrand { th: fam.data() }
    }

    fn jets(&self, b: &Box2, order: usize) -> ([Interval; 5], [Interval; 5]) {
        let ax = Axis::new(b.x);
        let ay = Axis::new(b.y);
        let (px, py) = (partials_x(&ax, &ay, order), partials_y(&ax, &ay, order));
        let mut jx = [Interval::ZERO; 5];
        let mut jy = [Interval::ZERO; 5];
        for k in 0..=order {
            jx[k] = self.th.u(px.p1[k], px.p2[k]);
            jy[k] = self.th.u(py.p1[k], py.p2[k]);
        }
        (jx, jy)
    }
}

impl Integrand for NormIntegrand {
    fn value(&self, b: &Box2) -> Interval {
        let (p1, p2) = modes(b);
        self.th.u_tight(p1, p2).sqr()
    }

    fn deriv2(&self, b: &Box2) -> Option<(Interval, Interval)> {
        let (jx, jy) = self.jets(b, 2);
        let d = |j: [Interval; 5]| (j[1].sqr() + j[0] * j[2]) * 2.0;
        Some((d(jx), d(jy)))
    }

    fn deriv4(&self, b: &Box2) -> Option<(Interval, Interval)> {
        let (jx, jy) = self.jets(b, 4);
        let d = |j: [Interval; 5]| (j[0] * j[4] + j[1] * j[3] * 4.0 + j[2].sqr() * 3.0) * 2.0;
        Some((d(jx), d(jy)))
    }
}

/// Quadrature settings for an entropy-type integral.
pub type EntropyConfig = QuadConfig;

/// `g(θ)` with leaf statistics and optionally the subdivision log.
pub fn entropy_g_detailed(fam: &ThetaFamily, cfg: &EntropyConfig, keep_log: bool) -> Result<QuadOutcome> {
    integ_detailed(&EntropyIntegrand::new(fam), cfg, keep_log)
}

/// Enclosure of `g(θ) = −∫ u_θ² log|u_θ|` over the θ interval.
pub fn entropy_g(fam: &ThetaFamily, cfg: &EntropyConfig) -> Result<Interval> {
    Ok(entropy_g_detailed(fam, cfg, false)?.value)
}

/// `h(θ)` with leaf statistics.
pub fn h_fn_detailed(fam: &ThetaFamily, cfg: &EntropyConfig, keep_log: bool) -> Result<QuadOutcome> {
    integ_detailed(&HIntegrand::new(fam), cfg, keep_log)
}

/// Enclosure of `h(θ) = −∫ |∂_θ u_θ|² log|u_θ|`; only the lower end is
/// meaningful, the upper end is usually `+∞`.
pub fn h_fn(fam: &ThetaFamily, cfg: &EntropyConfig) -> Result<Interval> {
    Ok(h_fn_detailed(fam, cfg, false)?.value)
}

/// `∫ u_θ²`.
pub fn norm_sq(fam: &ThetaFamily, cfg: &EntropyConfig) -> Result<Interval> {
    Ok(integ_detailed(&NormIntegrand::new(fam), cfg, false)?.value)
}

/// Both sides of `h(θ) > 1/4 + g(θ)`: `(low(h), high(1/4 + g))`.
pub fn g_second_cond(fam: &ThetaFamily, cfg_g: &EntropyConfig, cfg_h: &EntropyConfig) -> Result<(f64, f64)> {
    let h = h_fn(fam, cfg_h)?;
    let g = entropy_g(fam, cfg_g)?;
    Ok((h.lo(), (g + 0.25).hi()))
}

/// `g″ = 2 (h − 1/4 − g)` from enclosures of `g` and `h`.
pub fn g_second_from(g: Interval, h: Interval) -> Interval {
    (h - g - 0.25) * 2.0
}

/// The rectangle-perturbation parameter `γ ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaParams {
    gamma: Interval,
}

impl GammaParams {
    pub fn new(gamma: Interval) -> Result<Self> {
        if gamma.lo() < 0.0 || !gamma.is_bounded() {
            return Err(Error::Config(format!("gamma must be a bounded non-negative interval, got {gamma}")));
        }
        Ok(GammaParams { gamma })
    }

    pub fn gamma(&self) -> Interval {
        self.gamma
    }

    /// `(3/2) sin²θ − 2 + 5γ g` from an enclosure of `g` on the same θ.
    pub fn g_gamma_from(&self, theta: Interval, g: Interval) -> Interval {
        isin(theta).sqr() * 1.5 - 2.0 + self.gamma * 5.0 * g
    }

    /// `3 cos 2θ + 5γ g″` from an enclosure of `g″` on the same θ.
    pub fn g_gamma_second_from(&self, theta: Interval, g2: Interval) -> Interval {
        icos(theta * 2.0) * 3.0 + self.gamma * 5.0 * g2
    }
}

/// `g_γ(θ) = (3/2) sin²θ − 2 + 5γ g(θ)`.
pub fn g_gamma(fam: &ThetaFamily, gp: &GammaParams, cfg: &EntropyConfig) -> Result<Interval> {
    if gp.gamma == Interval::ZERO {
        return Ok(gp.g_gamma_from(fam.theta, Interval::ZERO));
    }
    Ok(gp.g_gamma_from(fam.theta, entropy_g(fam, cfg)?))
}

/// `g_γ″(θ) = 3 cos 2θ + 10γ (h − 1/4 − g)`.
pub fn g_gamma_second(
    fam: &ThetaFamily,
    gp: &GammaParams,
    cfg_g: &EntropyConfig,
    cfg_h: &EntropyConfig,
) -> Result<Interval> {
    if gp.gamma == Interval::ZERO {
        return Ok(gp.g_gamma_second_from(fam.theta, Interval::ZERO));
    }
    let g = entropy_g(fam, cfg_g)?;
    let h = h_fn(fam, cfg_h)?;
    Ok(gp.g_gamma_second_from(fam.theta, g_second_from(g, h)))
}

/// Scaling `t* = exp(4 g(θ))` that projects `u_θ` onto the Nehari-type set.
pub fn nehari_scale(fam: &ThetaFamily, cfg: &EntropyConfig) -> Result<Interval> {
    Ok(nehari_scale_from(entropy_g(fam, cfg)?))
}

pub fn nehari_scale_from(g: Interval) -> Interval {
    iexp(g * 4.0)
}

/// One sample of a plotted curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub theta: Interval,
    pub value: Interval,
    pub gamma: Option<f64>,
}

/// Writes `theta_lo,theta_hi,val_lo,val_hi[,gamma]`.
pub fn write_curve_csv<W: Write>(rows: &[CurveRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let with_gamma = rows.iter().any(|r| r.gamma.is_some());
    let mut header = vec!["theta_lo", "theta_hi", "val_lo", "val_hi"];
    if with_gamma {
        header.push("gamma");
    }
    out.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.theta.lo().to_string(),
            r.theta.hi().to_string(),
            r.value.lo().to_string(),
            r.value.hi().to_string(),
        ];
        if with_gamma {
            rec.push(r.gamma.map(|g| g.to_string()).unwrap_or_default());
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::RuleKind;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn u_examples() {
        let zero = ThetaFamily::new(Interval::ZERO).unwrap();
        assert!(u_theta(&zero, &Box2::point(0.5, 0.25)).contains(1.0));
        let full = Box2::new(iv(0.0, 1.0), iv(0.0, 1.0));
        assert!(u_theta(&zero, &full).subset_of(&iv(-1.0, 1.0)));
        let quarter = ThetaFamily::pi_over(4).unwrap();
        assert!(u_theta(&quarter, &Box2::point(0.3, 0.3)).contains(0.0));
        assert!(u_theta(&quarter, &Box2::new(iv(0.2, 0.21), iv(0.2, 0.21))).contains(0.0));
    }

    #[test]
    fn derivative_examples() {
        let zero = ThetaFamily::new(Interval::ZERO).unwrap();
        let y = 0.3f64;
        let d = du_dx(&zero, &Box2::point(0.0, y), 1).unwrap();
        assert!((d.midpoint() - std::f64::consts::PI * (2.0 * std::f64::consts::PI * y).sin()).abs() < 1e-14);
        assert!(du_dy(&zero, &Box2::point(0.5, 0.25), 1).unwrap().contains(0.0));
        let b = Box2::new(iv(0.1, 0.2), iv(0.6, 0.7));
        let (_, p2) = modes(&b);
        assert_eq!(du_dtheta(&zero, &b), -p2);
        assert!(du_dx(&zero, &b, 5).is_err());
    }

    #[test]
    fn thin_theta_mean_value_form_is_tighter() {
        let fam = ThetaFamily::new(iv(0.7, 0.8)).unwrap();
        let b = Box2::point(0.3, 0.6);
        let th = fam.data();
        let (p1, p2) = modes(&b);
        assert!(th.u_tight(p1, p2).width() <= th.u(p1, p2).width());
    }

    #[test]
    fn gamma_zero_closed_form() {
        let gp = GammaParams::new(Interval::ZERO).unwrap();
        let fam = ThetaFamily::new(Interval::ZERO).unwrap();
        let cfg = QuadConfig::new(2, 1e-2, RuleKind::Simpson);
        assert_eq!(g_gamma(&fam, &gp, &cfg).unwrap(), Interval::point(-2.0));
        assert_eq!(g_gamma_second(&fam, &gp, &cfg, &cfg).unwrap(), Interval::point(3.0));
        assert!(GammaParams::new(iv(-1.0, 0.0)).is_err());
    }

    #[test]
    fn nehari_of_zero_is_one() {
        assert_eq!(nehari_scale_from(Interval::ZERO), Interval::ONE);
    }

    #[test]
    fn curve_csv_layout() {
        let rows = [CurveRow {
            theta: Interval::ZERO,
            value: Interval::ONE,
            gamma: Some(2.5),
        }];
        let mut buf = Vec::new();
        write_curve_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "theta_lo,theta_hi,val_lo,val_hi,gamma\n0,0,1,1,2.5\n");
    }
}
