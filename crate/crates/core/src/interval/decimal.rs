//! Exact conversions between machine numbers and decimal / hexadecimal text.
//!
//! Every finite `f64` is a dyadic rational `m · 2^e`, so comparisons with a
//! decimal literal `M · 10^E` can be decided exactly with big integers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::cmp::Ordering;

use super::Interval;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

/// `|x| = m · 2^e` for finite nonzero `x`.
fn dyadic(x: f64) -> (u64, i32) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

fn pow10(k: u32) -> BigUint {
    BigUint::from(10u32).pow(k)
}

/// Compares `digits · 10^exp10` with `|x|` exactly (`x` finite).
fn cmp_decimal_abs(digits: &BigUint, exp10: i32, x: f64) -> Ordering {
    if x == 0.0 {
        return if digits.is_zero() { Ordering::Equal } else { Ordering::Greater };
    }
    let (m, e) = dyadic(x);
    let mut left = digits.clone();
    let mut right = BigUint::from(m);
    if exp10 >= 0 {
        left *= pow10(exp10 as u32);
    } else {
        right *= pow10((-exp10) as u32);
    }
    if e >= 0 {
        right <<= e as usize;
    } else {
        left <<= (-e) as usize;
    }
    left.cmp(&right)
}

struct DecimalLiteral {
    negative: bool,
    digits: BigUint,
    exp10: i32,
}

fn lex_decimal(s: &str) -> Option<DecimalLiteral> {
    let s = s.trim();
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let exp: i32 = match exponent {
        Some(e) => e.parse().ok()?,
        None => 0,
    };
    if exp.abs() > 100_000 {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let digits = BigUint::parse_bytes(all.as_bytes(), 10).unwrap_or_default();
    Some(DecimalLiteral {
        negative,
        digits,
        exp10: exp - frac_part.len() as i32,
    })
}

pub(super) fn parse_decimal(s: &str) -> Result<Interval> {
    let lit = lex_decimal(s).ok_or_else(|| Error::Parse(format!("malformed decimal literal {s:?}")))?;
    let nearest: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("malformed decimal literal {s:?}")))?;
    if !nearest.is_finite() {
        return Err(Error::Parse(format!("decimal literal {s:?} overflows")));
    }
    let ord = cmp_decimal_abs(&lit.digits, lit.exp10, nearest);
    let (lo, hi) = match (ord, lit.negative) {
        (Ordering::Equal, _) => (nearest, nearest),
        // |d| below |nearest|
        (Ordering::Less, false) => (nearest.next_down(), nearest),
        (Ordering::Less, true) => (nearest, nearest.next_up()),
        (Ordering::Greater, false) => (nearest, nearest.next_up()),
        (Ordering::Greater, true) => (nearest.next_down(), nearest),
    };
    Interval::new(lo, hi)
}

/// Decimal text for `x` with `sig` significant digits, rounded in `dir`.
pub fn format_decimal(x: f64, sig: usize, dir: Direction) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sig = sig.clamp(1, 40) as i32;
    let negative = x < 0.0;
    // round the magnitude up when rounding a negative number down
    let round_up = (dir == Direction::Up) != negative;
    let (m, e) = dyadic(x);
    let mut e10 = x.abs().log10().floor() as i32;
    let (mut n, e10) = loop {
        let k = sig - 1 - e10;
        let mut num = BigUint::from(m);
        let mut den = BigUint::one();
        if e >= 0 {
            num <<= e as usize;
        } else {
            den <<= (-e) as usize;
        }
        if k >= 0 {
            num *= pow10(k as u32);
        } else {
            den *= pow10((-k) as u32);
        }
        let (q, r) = num.div_rem(&den);
        let n = if round_up && !r.is_zero() { q + 1u32 } else { q };
        if n >= pow10(sig as u32) && !(round_up && n == pow10(sig as u32)) {
            e10 += 1;
            continue;
        }
        if n < pow10(sig as u32 - 1) {
            e10 -= 1;
            continue;
        }
        break (n, e10);
    };
    let mut e10 = e10;
    if n == pow10(sig as u32) {
        n = pow10(sig as u32 - 1);
        e10 += 1;
    }
    let digits = n.to_string();
    let body = render(&digits, e10);
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Places the decimal point in `digits` (value `d.ddd × 10^e10`).
fn render(digits: &str, e10: i32) -> String {
    let trimmed = digits.trim_end_matches('0');
    let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
    if (-6..=15).contains(&e10) {
        if e10 < 0 {
            format!("0.{}{}", "0".repeat((-e10 - 1) as usize), trimmed)
        } else {
            let int_len = (e10 + 1) as usize;
            if trimmed.len() <= int_len {
                format!("{}{}", trimmed, "0".repeat(int_len - trimmed.len()))
            } else {
                format!("{}.{}", &trimmed[..int_len], &trimmed[int_len..])
            }
        }
    } else {
        let (first, rest) = trimmed.split_at(1);
        if rest.is_empty() {
            format!("{first}e{e10}")
        } else {
            format!("{first}.{rest}e{e10}")
        }
    }
}

/// Exact hexadecimal-float text, e.g. `0x1.921fb54442d18p+1`.
pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sign = if x.is_sign_negative() && x != 0.0 { "-" } else { "" };
    if x == 0.0 {
        return "0x0p+0".into();
    }
    let bits = x.abs().to_bits();
    let exp = (bits >> 52) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (lead, e) = if exp == 0 { (0, -1022) } else { (1, exp - 1023) };
    let mut hex = format!("{frac:013x}");
    while hex.ends_with('0') {
        hex.pop();
    }
    let dot = if hex.is_empty() { String::new() } else { format!(".{hex}") };
    let esign = if e >= 0 { "+" } else { "-" };
    format!("{sign}0x{lead}{dot}p{esign}{}", e.abs())
}

/// Inverse of [`format_hex`].
pub fn parse_hex(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("malformed hex float {s:?}"));
    let s = s.trim();
    match s {
        "inf" | "+inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let body = body.strip_prefix("0x").ok_or_else(bad)?;
    let (mant, exp) = body.split_once('p').ok_or_else(bad)?;
    let exp: i32 = exp.parse().map_err(|_| bad())?;
    let (lead, frac) = match mant.split_once('.') {
        Some((l, f)) => (l, f),
        None => (mant, ""),
    };
    if frac.len() > 13 || !frac.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(bad());
    }
    let frac_bits = if frac.is_empty() {
        0
    } else {
        u64::from_str_radix(&format!("{frac:0<13}"), 16).map_err(|_| bad())?
    };
    let magnitude = match lead {
        "1" => {
            if !(-1022..=1023).contains(&exp) {
                return Err(bad());
            }
            f64::from_bits((((exp + 1023) as u64) << 52) | frac_bits)
        }
        "0" if frac_bits == 0 => 0.0,
        "0" if exp == -1022 => f64::from_bits(frac_bits),
        _ => return Err(bad()),
    };
    Ok(if negative { -magnitude } else { magnitude })
}
