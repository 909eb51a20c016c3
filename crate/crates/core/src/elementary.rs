//! Validated enclosures of the elementary functions and of `f(t) = t² log|t|`.
//!
//! `sin`, `cos`, `exp` and `ln` wrap the platform libm (glibc, whose documented
//! error bound for these functions is below one ulp) and widen the result by
//! [`LIBM_ULPS`] ulps on each side. The containment fuzz tests in
//! `tests/containment.rs` check this margin against a high-precision oracle.
//!
//! The special function `f` and its derivatives get tight extensions that
//! follow the monotonicity of `f` instead of composing naive enclosures,
//! which would be unbounded at the removable singularity `t = 0`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::interval::round::{widen_down, widen_up};
use crate::interval::Interval;

/// Outward margin, in ulps, applied to every libm result.
pub const LIBM_ULPS: u32 = 2;

/// Above this magnitude the critical-point search for `sin`/`cos` is skipped.
const TRIG_ARG_LIMIT: f64 = 1.0e15;

/// Enclosure of `v` computed by a libm routine, clamped to `[min, max]`.
#[inline]
fn libm_enclosure(v: f64, min: f64, max: f64) -> (f64, f64) {
    let lo = widen_down(v, LIBM_ULPS).max(min);
    let hi = widen_up(v, LIBM_ULPS).min(max);
    (lo, hi)
}

/// Argmin and minimum of `t² log t` and of `t (1 + 2 log t)` on `[0, ∞)`.
#[derive(Clone, Copy, Debug)]
pub struct FminConstants {
    /// encloses `e^{-1/2}`
    pub m: Interval,
    /// encloses `-1/(2e)`
    pub vmin: Interval,
    /// encloses `e^{-3/2}`, the argmin of `f'` on `[0, ∞)`
    pub m_prime: Interval,
    /// encloses `-2 e^{-3/2}`
    pub vmin_prime: Interval,
}

impl FminConstants {
    pub fn get() -> &'static FminConstants {
        static CONSTS: OnceLock<FminConstants> = OnceLock::new();
        CONSTS.get_or_init(|| {
            let m = iexp(Interval::point(-0.5));
            let vmin = iexp(Interval::point(-1.0)) * -0.5;
            let m_prime = iexp(Interval::point(-1.5));
            let vmin_prime = m_prime * -2.0;
            FminConstants {
                m,
                vmin,
                m_prime,
                vmin_prime,
            }
        })
    }
}

/// Encloses π with a width of one ulp.
pub fn ipi() -> Interval {
    // PI is the double just below π
    Interval::raw(PI, PI.next_up())
}

fn sin_point(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 0.0);
    }
    libm_enclosure(x.sin(), -1.0, 1.0)
}

fn cos_point(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (1.0, 1.0);
    }
    libm_enclosure(x.cos(), -1.0, 1.0)
}

/// Range of a 2π-periodic function with extrema at `π(k + offset)`, where
/// even `k` gives the maximum `1` and odd `k` the minimum `-1`.
fn trig_range(a: Interval, offset: f64, point: fn(f64) -> (f64, f64)) -> Interval {
    if !a.is_bounded() || a.mag() > TRIG_ARG_LIMIT || a.width() >= 2.0 * PI {
        return Interval::raw(-1.0, 1.0);
    }
    let (l0, h0) = point(a.lo());
    let (l1, h1) = point(a.hi());
    let mut lo = l0.min(l1);
    let mut hi = h0.max(h1);
    let pi = ipi();
    let k_first = (a.lo() / PI - offset).floor() - 1.0;
    let k_last = (a.hi() / PI - offset).ceil() + 1.0;
    let mut k = k_first;
    while k <= k_last {
        let crit = pi * (k + offset);
        if !crit.disjoint(&a) {
            if k.rem_euclid(2.0) == 0.0 {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
        }
        k += 1.0;
    }
    Interval::raw(lo, hi)
}

pub fn isin(a: Interval) -> Interval {
    trig_range(a, 0.5, sin_point)
}

pub fn icos(a: Interval) -> Interval {
    trig_range(a, 0.0, cos_point)
}

fn exp_down(x: f64) -> f64 {
    match x {
        0.0 => 1.0,
        f64::NEG_INFINITY => 0.0,
        _ => libm_enclosure(x.exp(), 0.0, f64::INFINITY).0,
    }
}

fn exp_up(x: f64) -> f64 {
    match x {
        0.0 => 1.0,
        f64::NEG_INFINITY => 0.0,
        _ => libm_enclosure(x.exp(), 0.0, f64::INFINITY).1,
    }
}

pub fn iexp(a: Interval) -> Interval {
    Interval::raw(exp_down(a.lo()), exp_up(a.hi()))
}

fn ln_down(x: f64) -> f64 {
    if x == 1.0 {
        0.0
    } else if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        libm_enclosure(x.ln(), f64::NEG_INFINITY, f64::INFINITY).0
    }
}

fn ln_up(x: f64) -> f64 {
    if x == 1.0 {
        0.0
    } else {
        libm_enclosure(x.ln(), f64::NEG_INFINITY, f64::INFINITY).1
    }
}

/// Natural logarithm of `a ∩ [0, ∞)`; the lower end is `-∞` when `0 ∈ a`.
pub fn ilog(a: Interval) -> Result<Interval> {
    if a.hi() <= 0.0 {
        return Err(Error::Domain("log"));
    }
    let lo = a.lo().max(0.0);
    Ok(Interval::raw(ln_down(lo), ln_up(a.hi())))
}

/// `log` of an interval known to have a positive upper end.
fn log_pos(a: Interval) -> Interval {
    ilog(a).expect("positive upper endpoint")
}

/// `t² log t` at a single `t ≥ 0`.
fn x2logx_point(t: f64) -> Interval {
    if t == 0.0 {
        return Interval::ZERO;
    }
    if t.is_infinite() {
        return Interval::raw(f64::MAX, f64::INFINITY);
    }
    let p = Interval::point(t);
    p.sqr() * log_pos(p)
}

/// `t (1 + 2 log t)` at a single `t ≥ 0`.
fn fprime_point(t: f64) -> Interval {
    if t == 0.0 {
        return Interval::ZERO;
    }
    if t.is_infinite() {
        return Interval::raw(f64::MAX, f64::INFINITY);
    }
    let p = Interval::point(t);
    p * (log_pos(p) * 2.0 + 1.0)
}

/// Range of a function on `b ⊆ [0, ∞)` that decreases on `[0, argmin]`,
/// increases afterwards, is negative on `(0, zero)` and positive beyond.
/// `point` must enclose the function at a single argument.
fn valley_range(
    b: Interval,
    argmin: Interval,
    vmin: Interval,
    zero: Interval,
    point: fn(f64) -> Interval,
) -> Interval {
    let (tl, tu) = (b.lo(), b.hi());
    let at_lo = point(tl);
    let at_hi = point(tu);
    let mut hi = at_lo.hi().max(at_hi.hi());
    if tu <= zero.lo() {
        hi = hi.min(0.0);
    }
    let mut lo = if tu <= argmin.lo() {
        at_hi.lo()
    } else if tl >= argmin.hi() {
        at_lo.lo()
    } else {
        vmin.lo()
    };
    lo = lo.max(vmin.lo());
    if tl >= zero.hi() {
        lo = lo.max(0.0);
    }
    Interval::raw(lo, hi)
}

/// Tight extension of `f(t) = t² log|t|` with `f(0) = 0`.
pub fn x2logx(a: Interval) -> Interval {
    let c = FminConstants::get();
    valley_range(a.abs(), c.m, c.vmin, Interval::ONE, x2logx_point)
}

/// Tight extension of `f'(t) = t (1 + 2 log|t|)` with `f'(0) = 0`.
pub fn f_prime(a: Interval) -> Interval {
    let c = FminConstants::get();
    let pos = |b: Interval| valley_range(b, c.m_prime, c.vmin_prime, c.m, fprime_point);
    if a.lo() >= 0.0 {
        pos(a)
    } else if a.hi() <= 0.0 {
        -pos(-a)
    } else {
        // f' is odd
        let right = pos(Interval::raw(0.0, a.hi()));
        let left = -pos(Interval::raw(0.0, -a.lo()));
        right.hull(&left)
    }
}

/// `f''(t) = 3 + 2 log|t|`.
pub fn f_second(a: Interval) -> Interval {
    let b = a.abs();
    if b.hi() == 0.0 {
        return Interval::ENTIRE;
    }
    log_pos(b) * 2.0 + 3.0
}

/// `f'''(t) = 2 / t`.
pub fn f_third(a: Interval) -> Interval {
    Interval::point(2.0).div_extended(&a)
}

/// `f''''(t) = -2 / t²`.
pub fn f_fourth(a: Interval) -> Interval {
    Interval::point(-2.0).div_extended(&a.sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn constants() {
        let c = FminConstants::get();
        assert!(c.m.interior_of(&iv(0.60, 0.61)));
        assert!(c.vmin.interior_of(&iv(-0.19, -0.18)));
        assert!(c.m.width() < 1e-15);
        assert!(ipi().contains(PI) && ipi().width() <= 4.0 * f64::EPSILON * 4.0);
        assert!((ipi() / 4.0).contains(0.7853981633974483));
    }

    #[test]
    fn trig_examples() {
        assert_eq!(isin(Interval::ZERO), Interval::ZERO);
        assert_eq!(icos(Interval::ZERO), Interval::ONE);
        let s = isin(iv(0.0, ipi().hi()));
        assert_eq!(s.hi(), 1.0);
        assert!(s.lo() <= 0.0 && s.lo() >= -1e-15);
        assert!(isin(ipi()).contains(0.0));
        assert_eq!(isin(iv(0.0, 7.0)), iv(-1.0, 1.0));
        assert_eq!(icos(iv(3.0, 3.5)).lo(), -1.0);
        assert_eq!(isin(Interval::ENTIRE), iv(-1.0, 1.0));
        let c = icos(iv(0.1, 0.2));
        assert!(c.contains(0.2f64.cos()) && c.contains(0.1f64.cos()) && c.hi() < 1.0);
    }

    #[test]
    fn exp_log_examples() {
        assert_eq!(iexp(Interval::ZERO), Interval::ONE);
        assert_eq!(ilog(Interval::ONE).unwrap(), Interval::ZERO);
        assert_eq!(ilog(iv(0.0, 1.0)).unwrap(), iv(f64::NEG_INFINITY, 0.0));
        assert_eq!(ilog(iv(-3.0, 1.0)).unwrap().lo(), f64::NEG_INFINITY);
        assert!(ilog(iv(-1.0, 0.0)).is_err());
        assert_eq!(iexp(iv(f64::NEG_INFINITY, 0.0)), iv(0.0, 1.0));
    }

    #[test]
    fn x2logx_examples() {
        assert_eq!(x2logx(Interval::ONE), Interval::ZERO);
        let r = x2logx(iv(0.0, 0.2));
        assert_eq!(r.hi(), 0.0);
        assert!(r.lo() <= -0.0643775164973640 && r.lo() > -0.0643776);
        let r = x2logx(iv(0.0, 2.0));
        assert!(r.lo() <= -0.18393972058572117 && r.lo() > -0.183940);
        assert!(r.hi() >= 2.772588722239781 && r.hi() < 2.7725888);
        let c = FminConstants::get();
        let r = x2logx(iv(-1.0, 1.0));
        assert!(r.subset_of(&iv(c.vmin.lo(), 0.0)));
        assert_eq!(x2logx(iv(-0.7, 0.3)), x2logx(iv(-0.3, 0.7)));
        for u in [0.1f64, 0.3, 0.5] {
            let w = x2logx(iv(0.0, u)).width();
            assert!(w <= 1.01 * (u * u * u.ln()).abs());
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(f_prime(Interval::ONE), Interval::ONE);
        assert_eq!(f_second(Interval::ONE), iv(3.0, 3.0));
        assert_eq!(f_third(iv(0.0, 1.0)), iv(2.0, f64::INFINITY));
        assert_eq!(f_fourth(iv(-1.0, 1.0)).hi(), -2.0);
        let p = f_prime(iv(-1.0, 1.0));
        let v = 2.0 * (-1.5f64).exp();
        assert!(p.lo() <= -1.0 && p.hi() >= 1.0 && p.mag() <= 1.0 + 1e-14);
        let p = f_prime(iv(0.0, 0.5));
        assert!(p.lo() <= -v && p.lo() > -v - 1e-12 && p.hi() == 0.0);
    }
}
