//! Directed rounding on top of round-to-nearest hardware arithmetic.
//!
//! Every operation computes the nearest result and then recovers the exact
//! rounding error with an error-free transformation (TwoSum for addition,
//! a fused multiply-add for products and quotients). The sign of that
//! error decides whether the nearest result is already a valid directed
//! bound or must be moved by one ulp. Results are therefore identical to
//! what a processor running in round-down / round-up mode would produce,
//! except in the gradual-underflow range where the error terms are no
//! longer exact; there we widen unconditionally by one ulp.

/// Below this magnitude the FMA residual of a product or quotient may be
/// rounded itself, so exactness can no longer be decided.
const TINY: f64 = 1.0e-290;

#[inline]
pub fn next_up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
pub fn next_down(x: f64) -> f64 {
    x.next_down()
}

/// Moves `x` down by `steps` ulps.
#[inline]
pub fn widen_down(mut x: f64, steps: u32) -> f64 {
    for _ in 0..steps {
        x = x.next_down();
    }
    x
}

/// Moves `x` up by `steps` ulps.
#[inline]
pub fn widen_up(mut x: f64, steps: u32) -> f64 {
    for _ in 0..steps {
        x = x.next_up();
    }
    x
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        if a.is_finite() && b.is_finite() {
            // overflow of two finite operands
            return if s > 0.0 { f64::MAX } else { f64::NEG_INFINITY };
        }
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        if a.is_finite() && b.is_finite() {
            return if s < 0.0 { f64::MIN } else { f64::INFINITY };
        }
        return s;
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// Sign of the exact residual `a*b - fl(a*b)`; `None` when undecidable.
#[inline]
fn mul_residual(a: f64, b: f64, p: f64) -> Option<f64> {
    if p.abs() < TINY {
        None
    } else {
        Some(a.mul_add(b, -p))
    }
}

/// Product rounded toward −∞ with the convention `0 · ±∞ = 0`.
#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        if a.is_finite() && b.is_finite() && p > 0.0 {
            return f64::MAX;
        }
        return p;
    }
    match mul_residual(a, b, p) {
        Some(e) if e >= 0.0 => p,
        // a positive product never needs a negative lower bound
        _ if (a > 0.0) == (b > 0.0) => p.next_down().max(0.0),
        _ => p.next_down(),
    }
}

/// Product rounded toward +∞ with the convention `0 · ±∞ = 0`.
#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        if a.is_finite() && b.is_finite() && p < 0.0 {
            return f64::MIN;
        }
        return p;
    }
    match mul_residual(a, b, p) {
        Some(e) if e <= 0.0 => p,
        _ if (a > 0.0) != (b > 0.0) => p.next_up().min(0.0) + 0.0,
        _ => p.next_up(),
    }
}

/// Sign of `a/b - fl(a/b)` expressed through the residual `a - q*b`.
#[inline]
fn div_residual_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if q.abs() < TINY || a.abs() < TINY {
        return None;
    }
    let r = (-q).mul_add(b, a);
    // a/b - q = r/b
    Some(if b > 0.0 { r } else { -r })
}

/// Quotient rounded toward −∞. Callers never pass `∞/∞` or a zero divisor.
#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_nan() {
        return f64::NEG_INFINITY;
    }
    if b.is_infinite() {
        // finite / ±∞ only occurs at unattained endpoints; the limit is 0
        return 0.0;
    }
    if q.is_infinite() {
        if a.is_finite() && q > 0.0 {
            return f64::MAX;
        }
        return q;
    }
    match div_residual_sign(a, b, q) {
        Some(e) if e >= 0.0 => q,
        _ if (a > 0.0) == (b > 0.0) => q.next_down().max(0.0),
        _ => q.next_down(),
    }
}

/// Quotient rounded toward +∞. Callers never pass `∞/∞` or a zero divisor.
#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_nan() {
        return f64::INFINITY;
    }
    if b.is_infinite() {
        return 0.0;
    }
    if q.is_infinite() {
        if a.is_finite() && q < 0.0 {
            return f64::MIN;
        }
        return q;
    }
    match div_residual_sign(a, b, q) {
        Some(e) if e <= 0.0 => q,
        _ if (a > 0.0) != (b > 0.0) => q.next_up().min(0.0) + 0.0,
        _ => q.next_up(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sums_stay_exact() {
        assert_eq!(add_down(1.0, 3.0), 4.0);
        assert_eq!(add_up(1.0, 3.0), 4.0);
        assert_eq!(add_down(0.5, 0.25), 0.75);
    }

    #[test]
    fn inexact_sums_bracket() {
        let lo = add_down(0.1, 0.2);
        let hi = add_up(0.1, 0.2);
        assert!(lo < hi);
        assert_eq!(hi, lo.next_up());
    }

    #[test]
    fn products_bracket() {
        let third = 1.0 / 3.0;
        assert!(mul_down(third, 3.0) <= 1.0 && mul_up(third, 3.0) >= 1.0);
        assert_eq!(mul_down(0.0, f64::INFINITY), 0.0);
        assert_eq!(mul_up(f64::NEG_INFINITY, 0.0), 0.0);
        assert_eq!(mul_down(2.0, f64::NEG_INFINITY), f64::NEG_INFINITY);
    }

    #[test]
    fn quotients_bracket() {
        let lo = div_down(1.0, 3.0);
        let hi = div_up(1.0, 3.0);
        assert_eq!(hi, lo.next_up());
        assert_eq!(div_down(1.0, 4.0), 0.25);
        assert_eq!(div_up(-1.0, f64::INFINITY), 0.0);
        assert_eq!(div_down(1.0, f64::INFINITY), 0.0);
    }

    #[test]
    fn overflow_directions() {
        assert_eq!(add_down(f64::MAX, f64::MAX), f64::MAX);
        assert_eq!(add_up(f64::MAX, f64::MAX), f64::INFINITY);
        assert_eq!(mul_down(f64::MAX, 2.0), f64::MAX);
        assert_eq!(mul_up(f64::MAX, 2.0), f64::INFINITY);
    }
}
