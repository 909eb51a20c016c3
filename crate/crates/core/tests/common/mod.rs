//! Shared test helpers: a high-precision scalar oracle and random inputs.
//!
//! Arithmetic is checked against exact rationals. Transcendental functions
//! are evaluated in binary fixed point with `BITS` fractional bits and
//! returned as a rational enclosure whose radius (2^-200, relative above 1)
//! dwarfs the accumulated truncation error but is far below one ulp.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use nodalsym::elementary::{icos, ipi};
use nodalsym::quad::{integ, IntegrandSpec, QuadConfig, RuleKind};
use nodalsym::{Box2, Interval};

pub type Q = BigRational;

const BITS: usize = 320;

pub fn q(x: f64) -> Q {
    BigRational::from_float(x).expect("finite")
}

/// A rational enclosure of an exact value.
#[derive(Clone, Debug)]
pub struct Encl {
    pub lo: Q,
    pub hi: Q,
}

impl Encl {
    pub fn exact(v: Q) -> Self {
        Encl { lo: v.clone(), hi: v }
    }

    /// Whether the interval certainly fails to contain the value.
    pub fn escapes(&self, iv: Interval) -> bool {
        let below = iv.lo().is_finite() && self.hi < q(iv.lo());
        let above = iv.hi().is_finite() && self.lo > q(iv.hi());
        below || above
    }

    fn mul_exact(&self, k: &Q) -> Encl {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if a <= b {
            Encl { lo: a, hi: b }
        } else {
            Encl { lo: b, hi: a }
        }
    }

    fn add_exact(&self, k: &Q) -> Encl {
        Encl {
            lo: &self.lo + k,
            hi: &self.hi + k,
        }
    }
}

fn one() -> BigInt {
    BigInt::one() << BITS
}

fn fx(r: &Q) -> BigInt {
    (r.numer() << BITS).div_floor(r.denom())
}

fn fx_mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> BITS
}

/// The fixed-point value `v` as a rational enclosure.
fn widen(v: &BigInt) -> Encl {
    let scale = BigInt::one() << BITS;
    let mag = v.abs().max(one());
    let rad = (mag >> 200) + 1;
    Encl {
        lo: Q::new(v - &rad, scale.clone()),
        hi: Q::new(v + &rad, scale),
    }
}

/// `Σ (-1)^n x^(2n+1) / (2n+1)` for small `|x|`.
fn atan_fx(x: &BigInt) -> BigInt {
    let x2 = fx_mul(x, x);
    let (mut pow, mut sum, mut n) = (x.clone(), BigInt::zero(), 0u32);
    while !pow.is_zero() {
        let term = &pow / (2 * n + 1);
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pow = fx_mul(&pow, &x2);
        n += 1;
    }
    sum
}

/// `Σ x^(2n+1) / (2n+1)`.
fn atanh_fx(x: &BigInt) -> BigInt {
    let x2 = fx_mul(x, x);
    let (mut pow, mut sum, mut n) = (x.clone(), BigInt::zero(), 0u32);
    while !pow.is_zero() {
        sum += &pow / (2 * n + 1);
        pow = fx_mul(&pow, &x2);
        n += 1;
    }
    sum
}

fn pi_fx() -> &'static BigInt {
    static PI: OnceLock<BigInt> = OnceLock::new();
    PI.get_or_init(|| {
        let a = atan_fx(&(one() / 5));
        let b = atan_fx(&(one() / 239));
        a * 16 - b * 4
    })
}

fn ln2_fx() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    LN2.get_or_init(|| atanh_fx(&(one() / 3)) * 2)
}

/// Taylor series of sin (odd = true) or cos around 0.
fn sincos_series(r: &BigInt, odd: bool) -> BigInt {
    let r2 = fx_mul(r, r);
    let mut term = if odd { r.clone() } else { one() };
    let mut k: u64 = if odd { 1 } else { 0 };
    let mut sum = BigInt::zero();
    let mut sign = true;
    while !term.is_zero() {
        if sign {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = fx_mul(&term, &r2) / ((k + 1) * (k + 2));
        k += 2;
        sign = !sign;
    }
    sum
}

/// `(sin x, cos x)` after reduction by multiples of π/2.
fn sincos_fx(x: f64) -> (BigInt, BigInt) {
    let xf = fx(&q(x));
    let half_pi: BigInt = pi_fx() >> 1u32;
    // nearest multiple of π/2
    let k: BigInt = (&xf + (&half_pi >> 1u32)).div_floor(&half_pi);
    let r = &xf - &k * &half_pi;
    let (s, c) = (sincos_series(&r, true), sincos_series(&r, false));
    let k4 = k.mod_floor(&BigInt::from(4)).to_u32_digits().1.first().copied().unwrap_or(0);
    match k4 {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

pub fn sin(x: f64) -> Encl {
    widen(&sincos_fx(x).0)
}

pub fn cos(x: f64) -> Encl {
    widen(&sincos_fx(x).1)
}

fn exp_series(r: &BigInt) -> BigInt {
    let (mut term, mut sum, mut k) = (one(), BigInt::zero(), 1u64);
    while !term.is_zero() {
        sum += &term;
        term = fx_mul(&term, r) / k;
        k += 1;
    }
    sum
}

pub fn exp(x: f64) -> Encl {
    let n = x.floor();
    let r = fx(&(q(x) - q(n)));
    let base = if n >= 0.0 { exp_series(&one()) } else { exp_series(&-one()) };
    let mut v = exp_series(&r);
    for _ in 0..(n.abs() as u64) {
        v = fx_mul(&v, &base);
    }
    widen(&v)
}

/// Natural log of a positive finite `x`.
pub fn ln(x: f64) -> Encl {
    assert!(x > 0.0);
    // x = m 2^e with m in [1, 2)
    let mut e: i64 = 0;
    let mut m = q(x);
    let two = Q::from_integer(BigInt::from(2));
    while m >= two {
        m /= &two;
        e += 1;
    }
    while m < Q::one() {
        m *= &two;
        e -= 1;
    }
    let s = fx(&((&m - Q::one()) / (&m + Q::one())));
    let v = atanh_fx(&s) * 2 + ln2_fx() * e;
    widen(&v)
}

/// `t² log|t|` with value 0 at 0.
pub fn x2logx(t: f64) -> Encl {
    if t == 0.0 {
        return Encl::exact(Q::zero());
    }
    ln(t.abs()).mul_exact(&(q(t) * q(t)))
}

/// `t (1 + 2 log|t|)`.
pub fn f_prime(t: f64) -> Encl {
    if t == 0.0 {
        return Encl::exact(Q::zero());
    }
    ln(t.abs()).mul_exact(&Q::from_integer(2.into())).add_exact(&Q::one()).mul_exact(&q(t))
}

/// `3 + 2 log|t|`.
pub fn f_second(t: f64) -> Encl {
    ln(t.abs()).mul_exact(&Q::from_integer(2.into())).add_exact(&Q::from_integer(3.into()))
}

/// A random machine number `± 10^u` with `u` uniform in `[lo_exp, hi_exp]`.
pub fn magnitude(rng: &mut StdRng, lo_exp: f64, hi_exp: f64, signed: bool) -> f64 {
    let v = 10f64.powf(rng.gen_range(lo_exp..=hi_exp));
    if signed && rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// A random interval starting at `a`: thin, relatively narrow, or wide.
pub fn interval_from(rng: &mut StdRng, a: f64) -> Interval {
    let w = match rng.gen_range(0..4) {
        0 => 0.0,
        1 => a.abs() * 10f64.powf(rng.gen_range(-16.0..0.0)),
        2 => 10f64.powf(rng.gen_range(-8.0..1.0)),
        _ => 10f64.powf(rng.gen_range(-2.0..2.0)),
    };
    Interval::new(a, a + w).expect("ordered")
}

/// A random machine point of `iv`.
pub fn point_in(rng: &mut StdRng, iv: Interval) -> f64 {
    let u: f64 = rng.gen();
    (iv.lo() + u * (iv.hi() - iv.lo())).clamp(iv.lo(), iv.hi())
}

pub const FUZZ_OPS: [&str; 14] = [
    "add", "sub", "mul", "div", "sqr", "abs", "sin", "cos", "exp", "log", "x2logx", "f_prime", "f_second",
    "parse_decimal",
];

#[derive(Debug)]
pub struct FuzzReport {
    pub op: &'static str,
    pub checks: usize,
    pub violations: usize,
    pub first: Option<String>,
}

fn random_decimal(rng: &mut StdRng) -> (String, Q) {
    let digits: String = (0..rng.gen_range(1..=25)).map(|_| char::from(b'0' + rng.gen_range(0..10u8))).collect();
    let e: i32 = rng.gen_range(-30..=30);
    let neg = rng.gen_bool(0.3);
    let int: BigInt = digits.parse().expect("digits");
    let ten = Q::from_integer(BigInt::from(10));
    let mut v = Q::from_integer(int);
    for _ in 0..e.abs() {
        if e > 0 {
            v *= &ten;
        } else {
            v /= &ten;
        }
    }
    let s = format!("{}{}e{}", if neg { "-" } else { "" }, digits, e);
    (s, if neg { -v } else { v })
}

/// Checks `n` random points against the interval extension of `op`.
pub fn fuzz_op(op: &'static str, n: usize, seed: u64) -> FuzzReport {
    use nodalsym::elementary as el;
    use rand::SeedableRng;

    let salt = op.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    let mut rng = StdRng::seed_from_u64(seed ^ salt);
    let mut report = FuzzReport { op, checks: 0, violations: 0, first: None };
    for _ in 0..n {
        let (desc, exact, iv) = match op {
            "add" | "sub" | "mul" | "div" => {
                let a = magnitude(&mut rng, -3.0, 3.0, true);
                let b = magnitude(&mut rng, -3.0, 3.0, true);
                let (ia, ib) = (interval_from(&mut rng, a), interval_from(&mut rng, b));
                let (x, y) = (point_in(&mut rng, ia), point_in(&mut rng, ib));
                let (qx, qy) = (q(x), q(y));
                let (v, r) = match op {
                    "add" => (qx + qy, ia + ib),
                    "sub" => (qx - qy, ia - ib),
                    "mul" => (qx * qy, ia * ib),
                    _ => {
                        if y == 0.0 {
                            continue;
                        }
                        (qx / qy, ia / ib)
                    }
                };
                (format!("{op}({x:e}, {y:e}) on {ia:?}, {ib:?}"), Encl::exact(v), r)
            }
            "sqr" | "abs" => {
                let a = magnitude(&mut rng, -3.0, 3.0, true);
                let ia = interval_from(&mut rng, a);
                let x = point_in(&mut rng, ia);
                let (v, r) = if op == "sqr" { (q(x) * q(x), ia.sqr()) } else { (q(x.abs()), ia.abs()) };
                (format!("{op}({x:e}) on {ia:?}"), Encl::exact(v), r)
            }
            "sin" | "cos" => {
                let a = magnitude(&mut rng, -3.0, 2.0, true);
                let ia = interval_from(&mut rng, a);
                let x = point_in(&mut rng, ia);
                let (v, r) = if op == "sin" { (sin(x), el::isin(ia)) } else { (cos(x), el::icos(ia)) };
                (format!("{op}({x:e}) on {ia:?}"), v, r)
            }
            "exp" => {
                let a = rng.gen_range(-40.0..40.0);
                let ia = interval_from(&mut rng, a);
                let x = point_in(&mut rng, ia);
                (format!("exp({x:e}) on {ia:?}"), exp(x), el::iexp(ia))
            }
            "log" => {
                let a = magnitude(&mut rng, -30.0, 6.0, false);
                let ia = interval_from(&mut rng, a);
                let x = point_in(&mut rng, ia);
                let r = el::ilog(ia).expect("positive");
                (format!("log({x:e}) on {ia:?}"), ln(x), r)
            }
            _ if op == "x2logx" || op == "f_prime" || op == "f_second" => {
                let a = magnitude(&mut rng, -30.0, 1.0, true);
                let ia = interval_from(&mut rng, a);
                let x = point_in(&mut rng, ia);
                let (v, r) = match op {
                    "x2logx" => (x2logx(x), el::x2logx(ia)),
                    "f_prime" => (f_prime(x), el::f_prime(ia)),
                    _ => {
                        if x == 0.0 {
                            continue;
                        }
                        (f_second(x), el::f_second(ia))
                    }
                };
                (format!("{op}({x:e}) on {ia:?}"), v, r)
            }
            "parse_decimal" => {
                let (s, v) = random_decimal(&mut rng);
                let r = Interval::parse_decimal(&s).expect("valid literal");
                (format!("parse {s}"), Encl::exact(v), r)
            }
            _ => panic!("unknown op {op}"),
        };
        report.checks += 1;
        if exact.escapes(iv) {
            report.violations += 1;
            report.first.get_or_insert(format!("{desc} -> {iv:?}"));
        }
    }
    report
}

/// `φ₁² = sin²(πx) sin²(2πy)` written with cosines, with its pure derivatives.
pub fn phi1_sq() -> IntegrandSpec {
    fn parts(b: &Box2) -> (Interval, Interval, Interval, Interval) {
        let pi = ipi();
        let cx = icos(b.x * (pi * 2.0));
        let cy = icos(b.y * (pi * 4.0));
        ((Interval::ONE - cx) * 0.5, (Interval::ONE - cy) * 0.5, cx, cy)
    }
    IntegrandSpec::new(|b| {
        let (sx, sy, _, _) = parts(b);
        sx * sy
    })
    .with_deriv2(|b| {
        let (sx, sy, cx, cy) = parts(b);
        let pi2 = ipi().sqr();
        (cx * sy * (pi2 * 2.0), sx * cy * (pi2 * 8.0))
    })
    .with_deriv4(|b| {
        let (sx, sy, cx, cy) = parts(b);
        let pi4 = ipi().sqr().sqr();
        (cx * sy * (pi4 * -8.0), sx * cy * (pi4 * -128.0))
    })
}

/// Geometric mean of the width ratio per unit depth between depths 4 and 8.
pub fn convergence_ratio(rule: RuleKind) -> f64 {
    let f = phi1_sq();
    let w = |d| integ(&f, &QuadConfig::new(d, 1e-300, rule)).unwrap().width();
    (w(8) / w(4)).powf(0.25)
}


/// Exact value of a decimal literal such as `-1.25e-3`, `inf` excluded.
pub fn decimal_q(s: &str) -> Q {
    let (neg, s) = s.strip_prefix('-').map_or((false, s), |r| (true, r));
    let (mant, exp) = s.split_once(['e', 'E']).map_or((s, 0i32), |(m, e)| (m, e.parse().expect("exponent")));
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("digits");
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let v = if shift >= 0 {
        Q::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        Q::new(digits, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        -v
    } else {
        v
    }
}

/// Plain floating-point midpoint-rule value of `g(θ) = −∫ u_θ² log|u_θ|`
/// on an `n × n` grid. Not rigorous; used as an independent sampling oracle.
pub fn g_sampled(theta: f64, n: usize) -> f64 {
    use std::f64::consts::PI;
    let pts: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
    let s1: Vec<f64> = pts.iter().map(|t| (PI * t).sin()).collect();
    let s2: Vec<f64> = pts.iter().map(|t| (2.0 * PI * t).sin()).collect();
    let (c, s) = (theta.cos(), theta.sin());
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let u = s1[i] * s2[j] * c - s2[i] * s1[j] * s;
            if u != 0.0 {
                sum -= u * u * u.abs().ln();
            }
        }
    }
    sum / (n * n) as f64
}

/// Grid argmin of `θ ↦ (3/2) sin²θ − 2 + 5γ g(θ)` on `[0, π/2]`.
pub fn g_gamma_sampled_argmin(gamma: f64, samples: usize, n: usize) -> f64 {
    let step = std::f64::consts::FRAC_PI_2 / samples as f64;
    (0..=samples)
        .map(|k| {
            let t = k as f64 * step;
            (t, 1.5 * t.sin().powi(2) - 2.0 + 5.0 * gamma * g_sampled(t, n))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(t, _)| t)
        .unwrap()
}
