//! Closed intervals over `f64` with outward rounding.
//!
//! An [`Interval`] is a pair `lo <= hi` of machine numbers where `lo` may be
//! `-∞` and `hi` may be `+∞`. Every arithmetic operation returns an interval
//! that contains all exact results obtainable from points of its operands
//! (the containment property). There is no empty interval: a disjoint
//! intersection is reported as `None`.

mod decimal;
pub mod round;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use decimal::{format_decimal, format_hex, parse_hex, Direction};

use crate::error::{Error, Result};
use round::{add_down, add_up, div_down, div_up, mul_down, mul_up, sub_down, sub_up};

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// A box `x × y` in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Box2 {
    pub x: Interval,
    pub y: Interval,
}

impl Box2 {
    pub fn new(x: Interval, y: Interval) -> Self {
        Box2 { x, y }
    }

    pub fn point(x: f64, y: f64) -> Self {
        Box2 {
            x: Interval::point(x),
            y: Interval::point(y),
        }
    }
}

#[inline]
fn clean_zero(x: f64) -> f64 {
    // -0.0 and 0.0 must serialize identically
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]`, rejecting NaN, reversed bounds, `lo = +∞` and `hi = -∞`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval {
            lo: clean_zero(lo),
            hi: clean_zero(hi),
        })
    }

    /// Internal constructor for endpoints already known to be valid.
    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(!(lo.is_nan() || hi.is_nan()), "NaN endpoint");
        debug_assert!(lo <= hi, "reversed interval [{lo}, {hi}]");
        Interval {
            lo: clean_zero(lo),
            hi: clean_zero(hi),
        }
    }

    /// The degenerate interval `[x, x]`.
    ///
    /// # Panics
    /// If `x` is NaN or infinite.
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "point interval needs a finite value, got {x}");
        Interval::raw(x, x)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_thin(&self) -> bool {
        self.lo == self.hi
    }

    /// `hi - lo` rounded up; `+∞` for unbounded intervals.
    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    /// `self ⊆ other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the interior of `other`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::raw(lo, hi))
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.intersect(other).is_none()
    }

    /// Thin interval enclosing the exact midpoint `(lo + hi) / 2`.
    pub fn mid_interval(&self) -> Result<Interval> {
        if !self.is_bounded() {
            return Err(Error::Unbounded("midpoint"));
        }
        let lo = mul_down(add_down(self.lo, self.hi), 0.5);
        let hi = mul_up(add_up(self.lo, self.hi), 0.5);
        Ok(Interval::raw(lo, hi))
    }

    /// A machine number close to the midpoint, inside the interval.
    pub fn midpoint(&self) -> f64 {
        if !self.is_bounded() {
            return if self.lo.is_finite() {
                self.lo
            } else if self.hi.is_finite() {
                self.hi
            } else {
                0.0
            };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval::raw(0.0, (-self.lo).max(self.hi))
        }
    }

    pub fn sqr(&self) -> Interval {
        if self.lo >= 0.0 {
            Interval::raw(mul_down(self.lo, self.lo).max(0.0), mul_up(self.hi, self.hi))
        } else if self.hi <= 0.0 {
            Interval::raw(mul_down(self.hi, self.hi).max(0.0), mul_up(self.lo, self.lo))
        } else {
            let m = (-self.lo).max(self.hi);
            Interval::raw(0.0, mul_up(m, m))
        }
    }

    /// Division that never fails: a divisor containing zero yields an
    /// unbounded result (possibly the whole line).
    pub fn div_extended(&self, b: &Interval) -> Interval {
        let a = self;
        if b.lo > 0.0 {
            if a.lo >= 0.0 {
                Interval::raw(div_down(a.lo, b.hi), div_up(a.hi, b.lo))
            } else if a.hi <= 0.0 {
                Interval::raw(div_down(a.lo, b.lo), div_up(a.hi, b.hi))
            } else {
                Interval::raw(div_down(a.lo, b.lo), div_up(a.hi, b.lo))
            }
        } else if b.hi < 0.0 {
            if a.lo >= 0.0 {
                Interval::raw(div_down(a.hi, b.hi), div_up(a.lo, b.lo))
            } else if a.hi <= 0.0 {
                Interval::raw(div_down(a.hi, b.lo), div_up(a.lo, b.hi))
            } else {
                Interval::raw(div_down(a.hi, b.hi), div_up(a.lo, b.hi))
            }
        } else if a.contains_zero() || (b.lo < 0.0 && b.hi > 0.0) || (b.lo == 0.0 && b.hi == 0.0) {
            Interval::ENTIRE
        } else if b.lo == 0.0 {
            // b = [0, bh], bh > 0
            if a.lo > 0.0 {
                Interval::raw(div_down(a.lo, b.hi), f64::INFINITY)
            } else {
                Interval::raw(f64::NEG_INFINITY, div_up(a.hi, b.hi))
            }
        } else {
            // b = [bl, 0], bl < 0
            if a.lo > 0.0 {
                Interval::raw(f64::NEG_INFINITY, div_up(a.lo, b.lo))
            } else {
                Interval::raw(div_down(a.hi, b.lo), f64::INFINITY)
            }
        }
    }

    /// Multiplication by a machine number.
    pub fn scale(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }

    /// Smallest machine interval containing the exact value of a decimal literal.
    pub fn parse_decimal(s: &str) -> Result<Interval> {
        decimal::parse_decimal(s)
    }

    /// `[lo_dec, hi_dec]` with `sig` significant digits, rounded outward.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        format!(
            "[{}, {}]",
            format_decimal(self.lo, sig, Direction::Down),
            format_decimal(self.hi, sig, Direction::Up)
        )
    }

    /// Exact hexadecimal-float form `[lo_hex, hi_hex]`.
    pub fn to_hex_string(&self) -> String {
        format!("[{}, {}]", format_hex(self.lo), format_hex(self.hi))
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(12);
        f.write_str(&self.to_decimal_string(sig))
    }
}

/// Significant digits of the decimal form in serialized intervals.
const SERIAL_DIGITS: usize = 17;

/// Serialized form: outward-rounded decimals plus the exact hex-float dual.
#[derive(Serialize, Deserialize)]
struct IntervalRecord {
    lo: String,
    hi: String,
    lo_hex: String,
    hi_hex: String,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalRecord {
            lo: format_decimal(self.lo, SERIAL_DIGITS, Direction::Down),
            hi: format_decimal(self.hi, SERIAL_DIGITS, Direction::Up),
            lo_hex: format_hex(self.lo),
            hi_hex: format_hex(self.hi),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    /// The hex fields are authoritative; the decimals must enclose them.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = IntervalRecord::deserialize(d)?;
        let lo = parse_hex(&r.lo_hex).map_err(D::Error::custom)?;
        let hi = parse_hex(&r.hi_hex).map_err(D::Error::custom)?;
        let iv = Interval::new(lo, hi).map_err(D::Error::custom)?;
        let dec_lo = parse_bound(&r.lo).map_err(D::Error::custom)?;
        let dec_hi = parse_bound(&r.hi).map_err(D::Error::custom)?;
        if dec_lo.lo() > lo || dec_hi.hi() < hi {
            return Err(D::Error::custom(format!(
                "decimal form [{}, {}] does not enclose {}",
                r.lo,
                r.hi,
                iv.to_hex_string()
            )));
        }
        Ok(iv)
    }
}

/// A decimal endpoint, allowing `inf` / `-inf`.
fn parse_bound(s: &str) -> Result<Interval> {
    match s {
        "inf" => Ok(Interval::raw(f64::MAX, f64::INFINITY)),
        "-inf" => Ok(Interval::raw(f64::NEG_INFINITY, f64::MIN)),
        _ => decimal::parse_decimal(s),
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, b: Interval) -> Interval {
        Interval::raw(add_down(self.lo, b.lo), add_up(self.hi, b.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, b: Interval) -> Interval {
        Interval::raw(sub_down(self.lo, b.hi), sub_up(self.hi, b.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, b: Interval) -> Interval {
        let a = self;
        // fast paths for sign-definite operands
        if a.lo >= 0.0 && b.lo >= 0.0 {
            return Interval::raw(mul_down(a.lo, b.lo).max(0.0), mul_up(a.hi, b.hi));
        }
        if a.hi <= 0.0 && b.hi <= 0.0 {
            return Interval::raw(mul_down(a.hi, b.hi).max(0.0), mul_up(a.lo, b.lo));
        }
        let lo = mul_down(a.lo, b.lo)
            .min(mul_down(a.lo, b.hi))
            .min(mul_down(a.hi, b.lo))
            .min(mul_down(a.hi, b.hi));
        let hi = mul_up(a.lo, b.lo)
            .max(mul_up(a.lo, b.hi))
            .max(mul_up(a.hi, b.lo))
            .max(mul_up(a.hi, b.hi));
        Interval::raw(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, b: Interval) -> Interval {
        self.div_extended(&b)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, b: f64) -> Interval {
        self + Interval::point(b)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, b: f64) -> Interval {
        self - Interval::point(b)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, b: f64) -> Interval {
        self * Interval::point(b)
    }
}

impl Div<f64> for Interval {
    type Output = Interval;
    fn div(self, b: f64) -> Interval {
        self.div_extended(&Interval::point(b))
    }
}

impl Mul<Interval> for f64 {
    type Output = Interval;
    fn mul(self, b: Interval) -> Interval {
        Interval::point(self) * b
    }
}

impl Add<Interval> for f64 {
    type Output = Interval;
    fn add(self, b: Interval) -> Interval {
        Interval::point(self) + b
    }
}
