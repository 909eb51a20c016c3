//! Rigorous adaptive integration of mean values over the unit square.
//!
//! A cell is described by four thin corner intervals ([`BoxCorners`]). On each
//! cell the integrand's mean is enclosed either by its range over the cell
//! (the basic rule) or by a midpoint / tensor-Simpson sum plus a rigorous
//! error term built from derivative bounds. [`mean_integ`] chooses between
//! the two per cell and subdivides into four children until the high-order
//! error term drops below `tol / 2` or the depth budget is spent.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::round::{add_up, div_up, mul_up};
use crate::interval::{Box2, Interval};

/// Recursion levels below the root whose children are evaluated in parallel.
const PARALLEL_LEVELS: u32 = 4;

/// An interval-valued integrand with optional derivative bounds.
///
/// All three functions must satisfy the containment property on every box
/// they are given. Derivative bounds may be unbounded.
pub trait Integrand: Sync {
    fn value(&self, b: &Box2) -> Interval;

    /// `(∂xx f, ∂yy f)` over `b`.
    fn deriv2(&self, _b: &Box2) -> Option<(Interval, Interval)> {
        None
    }

    /// `(∂x⁴ f, ∂y⁴ f)` over `b`.
    fn deriv4(&self, _b: &Box2) -> Option<(Interval, Interval)> {
        None
    }
}

type BoxFn<T> = Box<dyn Fn(&Box2) -> T + Send + Sync>;

/// An [`Integrand`] assembled from closures.
pub struct IntegrandSpec {
    value: BoxFn<Interval>,
    deriv2: Option<BoxFn<(Interval, Interval)>>,
    deriv4: Option<BoxFn<(Interval, Interval)>>,
}

impl IntegrandSpec {
    pub fn new(value: impl Fn(&Box2) -> Interval + Send + Sync + 'static) -> Self {
        IntegrandSpec {
            value: Box::new(value),
            deriv2: None,
            deriv4: None,
        }
    }

    pub fn with_deriv2(mut self, d: impl Fn(&Box2) -> (Interval, Interval) + Send + Sync + 'static) -> Self {
        self.deriv2 = Some(Box::new(d));
        self
    }

    pub fn with_deriv4(mut self, d: impl Fn(&Box2) -> (Interval, Interval) + Send + Sync + 'static) -> Self {
        self.deriv4 = Some(Box::new(d));
        self
    }

    pub fn constant(c: Interval) -> Self {
        IntegrandSpec::new(move |_| c)
            .with_deriv2(|_| (Interval::ZERO, Interval::ZERO))
            .with_deriv4(|_| (Interval::ZERO, Interval::ZERO))
    }
}

impl Integrand for IntegrandSpec {
    fn value(&self, b: &Box2) -> Interval {
        (self.value)(b)
    }

    fn deriv2(&self, b: &Box2) -> Option<(Interval, Interval)> {
        self.deriv2.as_ref().map(|d| d(b))
    }

    fn deriv4(&self, b: &Box2) -> Option<(Interval, Interval)> {
        self.deriv4.as_ref().map(|d| d(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Basic,
    Midpoint,
    Simpson,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Basic => "basic",
            RuleKind::Midpoint => "midpoint",
            RuleKind::Simpson => "simpson",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(RuleKind::Basic),
            "midpoint" => Ok(RuleKind::Midpoint),
            "simpson" => Ok(RuleKind::Simpson),
            _ => Err(Error::Parse(format!("unknown rule {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub depth: u32,
    pub tol: f64,
    pub rule: RuleKind,
}

impl QuadConfig {
    pub fn new(depth: u32, tol: f64, rule: RuleKind) -> Self {
        QuadConfig { depth, tol, rule }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("tol must be positive and finite, got {}", self.tol)));
        }
        Ok(())
    }
}

/// A cell given by thin intervals around its four corner coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxCorners {
    pub x_left: Interval,
    pub x_right: Interval,
    pub y_left: Interval,
    pub y_right: Interval,
}

impl BoxCorners {
    pub fn new(x_left: Interval, x_right: Interval, y_left: Interval, y_right: Interval) -> Self {
        BoxCorners {
            x_left,
            x_right,
            y_left,
            y_right,
        }
    }

    pub fn unit() -> Self {
        BoxCorners::new(Interval::ZERO, Interval::ONE, Interval::ZERO, Interval::ONE)
    }

    /// `[low(x_left), high(x_right)] × [low(y_left), high(y_right)]`.
    pub fn enclosing(&self) -> Box2 {
        Box2::new(
            Interval::raw(self.x_left.lo(), self.x_right.hi()),
            Interval::raw(self.y_left.lo(), self.y_right.hi()),
        )
    }

    /// Over-approximations of the two side lengths.
    pub fn side_lengths(&self) -> (f64, f64) {
        let e = self.enclosing();
        (e.x.width(), e.y.width())
    }

    fn x_mid(&self) -> Interval {
        (self.x_left + self.x_right) * 0.5
    }

    fn y_mid(&self) -> Interval {
        (self.y_left + self.y_right) * 0.5
    }

    /// The four children, ordered bottom-left, bottom-right, top-left, top-right.
    pub fn split(&self) -> [BoxCorners; 4] {
        let xm = self.x_mid();
        let ym = self.y_mid();
        [
            BoxCorners::new(self.x_left, xm, self.y_left, ym),
            BoxCorners::new(xm, self.x_right, self.y_left, ym),
            BoxCorners::new(self.x_left, xm, ym, self.y_right),
            BoxCorners::new(xm, self.x_right, ym, self.y_right),
        ]
    }
}

/// `sum of h^p * mag(d) / denom`, rounded up; `+∞` when unavailable.
fn error_term(h: (f64, f64), d: Option<(Interval, Interval)>, p: i32, denom: f64) -> f64 {
    let Some((dx, dy)) = d else {
        return f64::INFINITY;
    };
    let pow_up = |x: f64| (0..p).fold(1.0, |acc, _| mul_up(acc, x));
    let e = div_up(add_up(mul_up(pow_up(h.0), dx.mag()), mul_up(pow_up(h.1), dy.mag())), denom);
    if e.is_nan() {
        f64::INFINITY
    } else {
        e
    }
}

fn widen_by(i: Interval, e: f64) -> Interval {
    if e.is_infinite() {
        return Interval::ENTIRE;
    }
    i + Interval::raw(-e, e)
}

/// Midpoint error bound `(h₁²‖∂xx f‖ + h₂²‖∂yy f‖) / 24` for the cell.
pub fn midpoint_error<F: Integrand + ?Sized>(f: &F, c: &BoxCorners) -> f64 {
    error_term(c.side_lengths(), f.deriv2(&c.enclosing()), 2, 24.0)
}

/// Simpson error bound `(h₁⁴‖∂x⁴ f‖ + h₂⁴‖∂y⁴ f‖) / 2880` for the cell.
pub fn simpson_error<F: Integrand + ?Sized>(f: &F, c: &BoxCorners) -> f64 {
    error_term(c.side_lengths(), f.deriv4(&c.enclosing()), 4, 2880.0)
}

fn midpoint_sum<F: Integrand + ?Sized>(f: &F, c: &BoxCorners) -> Interval {
    f.value(&Box2::new(c.x_mid(), c.y_mid()))
}

fn simpson_sum<F: Integrand + ?Sized>(f: &F, c: &BoxCorners) -> Interval {
    let xs = [c.x_left, c.x_mid(), c.x_right];
    let ys = [c.y_left, c.y_mid(), c.y_right];
    let v = |i: usize, j: usize| f.value(&Box2::new(xs[i], ys[j]));
    let corners = v(0, 0) + v(2, 0) + v(0, 2) + v(2, 2);
    let edges = v(1, 0) + v(0, 1) + v(2, 1) + v(1, 2);
    let centre = v(1, 1);
    (corners + edges * 4.0 + centre * 16.0) / 36.0
}

/// The integrand's range over the cell; encloses its mean.
pub fn rule_basic<F: Integrand + ?Sized>(f: &F, c: &BoxCorners) -> Interval {
    f.value(&c.enclosing())
}

/// Midpoint enclosure and its error bound. The bound is `+∞` when the
/// integrand has no second-derivative supplier or the bounds are unbounded.
pub fn rule_midpoint<F: Integrand + ?Sized>(f: &F, c: &BoxCorners) -> (Interval, f64) {
    let e = midpoint_error(f, c);
    (widen_by(midpoint_sum(f, c), e), e)
}

/// Tensor-Simpson enclosure and its error bound.
pub fn rule_simpson<F: Integrand + ?Sized>(f: &F, c: &BoxCorners) -> (Interval, f64) {
    let e = simpson_error(f, c);
    (widen_by(simpson_sum(f, c), e), e)
}

/// A leaf cell of an adaptive integration.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafCell {
    pub x: Interval,
    pub y: Interval,
    pub rule: RuleKind,
    pub enclosure: Interval,
    pub err: f64,
}

/// Leaf cells in deterministic depth-first child order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SubdivisionLog {
    pub cells: Vec<LeafCell>,
}

impl SubdivisionLog {
    /// Writes `x_lo,x_hi,y_lo,y_hi,rule,enc_lo,enc_hi,err`, one row per leaf.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x_lo", "x_hi", "y_lo", "y_hi", "rule", "enc_lo", "enc_hi", "err"])?;
        for c in &self.cells {
            out.write_record([
                c.x.lo().to_string(),
                c.x.hi().to_string(),
                c.y.lo().to_string(),
                c.y.hi().to_string(),
                c.rule.name().to_string(),
                c.enclosure.lo().to_string(),
                c.enclosure.hi().to_string(),
                c.err.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Leaf counts by rule, plus the deepest level reached.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadStats {
    pub basic_cells: u64,
    pub midpoint_cells: u64,
    pub simpson_cells: u64,
    pub max_level: u32,
}

impl QuadStats {
    fn leaf(rule: RuleKind, level: u32) -> Self {
        let mut s = QuadStats {
            max_level: level,
            ..Default::default()
        };
        match rule {
            RuleKind::Basic => s.basic_cells = 1,
            RuleKind::Midpoint => s.midpoint_cells = 1,
            RuleKind::Simpson => s.simpson_cells = 1,
        }
        s
    }

    fn merge(self, o: QuadStats) -> QuadStats {
        QuadStats {
            basic_cells: self.basic_cells + o.basic_cells,
            midpoint_cells: self.midpoint_cells + o.midpoint_cells,
            simpson_cells: self.simpson_cells + o.simpson_cells,
            max_level: self.max_level.max(o.max_level),
        }
    }

    pub fn leaves(&self) -> u64 {
        self.basic_cells + self.midpoint_cells + self.simpson_cells
    }
}

#[derive(Clone, Debug)]
pub struct QuadOutcome {
    pub value: Interval,
    pub stats: QuadStats,
    pub log: Option<SubdivisionLog>,
}

struct Node {
    value: Interval,
    stats: QuadStats,
    cells: Vec<LeafCell>,
}

fn recurse<F: Integrand + ?Sized>(
    f: &F,
    c: &BoxCorners,
    d: u32,
    tol: f64,
    rule: RuleKind,
    level: u32,
    keep_log: bool,
) -> Node {
    let err = match rule {
        RuleKind::Basic => f64::INFINITY,
        RuleKind::Midpoint => midpoint_error(f, c),
        RuleKind::Simpson => simpson_error(f, c),
    };
    let accurate = err <= tol * 0.5;
    let high_order = |f: &F| match rule {
        RuleKind::Midpoint => widen_by(midpoint_sum(f, c), err),
        _ => widen_by(simpson_sum(f, c), err),
    };
    let (mut i0, mut used) = if accurate {
        (high_order(f), rule)
    } else {
        (rule_basic(f, c), RuleKind::Basic)
    };
    if d == 0 && !accurate && err.is_finite() {
        // out of depth: both enclosures hold, keep their intersection
        if let Some(both) = i0.intersect(&high_order(f)) {
            if both.width() < i0.width() {
                used = rule;
            }
            i0 = both;
        }
    }
    // without an error estimate the basic rule stops once its own width is small
    let done = accurate || (rule == RuleKind::Basic && i0.width() <= tol);
    if d == 0 || done {
        let cells = if keep_log {
            let e = c.enclosing();
            vec![LeafCell {
                x: e.x,
                y: e.y,
                rule: used,
                enclosure: i0,
                err,
            }]
        } else {
            Vec::new()
        };
        return Node {
            value: i0,
            stats: QuadStats::leaf(used, level),
            cells,
        };
    }
    let kids = c.split();
    let go = |k: &BoxCorners| recurse(f, k, d - 1, tol, rule, level + 1, keep_log);
    let [n1, n2, n3, n4] = if level < PARALLEL_LEVELS {
        let ((n1, n2), (n3, n4)) = rayon::join(
            || rayon::join(|| go(&kids[0]), || go(&kids[1])),
            || rayon::join(|| go(&kids[2]), || go(&kids[3])),
        );
        [n1, n2, n3, n4]
    } else {
        [go(&kids[0]), go(&kids[1]), go(&kids[2]), go(&kids[3])]
    };
    let value = (((n1.value + n2.value) + n3.value) + n4.value) * 0.25;
    let stats = n1.stats.merge(n2.stats).merge(n3.stats).merge(n4.stats);
    let mut cells = n1.cells;
    for mut n in [n2, n3, n4] {
        cells.append(&mut n.cells);
    }
    Node { value, stats, cells }
}

/// Adaptive enclosure of the mean of `f` over the cell `c`.
///
/// A cell is accepted with the high-order `rule` when its error bound is at
/// most `tol / 2`; otherwise its range is used and, while `depth > 0`, the
/// cell is split into four and the children's enclosures are averaged.
/// With `RuleKind::Basic` a cell is accepted once its range is at most
/// `tol` wide. A cell at the depth limit whose high-order bound is finite
/// but too large still intersects the two enclosures.
pub fn mean_integ<F: Integrand + ?Sized>(f: &F, c: &BoxCorners, depth: u32, tol: f64, rule: RuleKind) -> Interval {
    recurse(f, c, depth, tol, rule, 0, false).value
}

/// [`mean_integ`] that also returns the leaf cells.
pub fn mean_integ_logged<F: Integrand + ?Sized>(
    f: &F,
    c: &BoxCorners,
    depth: u32,
    tol: f64,
    rule: RuleKind,
) -> (Interval, SubdivisionLog) {
    let n = recurse(f, c, depth, tol, rule, 0, true);
    (n.value, SubdivisionLog { cells: n.cells })
}

fn check_rule<F: Integrand + ?Sized>(f: &F, rule: RuleKind) -> Result<()> {
    let b = BoxCorners::unit().enclosing();
    match rule {
        RuleKind::Midpoint if f.deriv2(&b).is_none() => Err(Error::MissingDerivative("midpoint")),
        RuleKind::Simpson if f.deriv4(&b).is_none() => Err(Error::MissingDerivative("simpson")),
        _ => Ok(()),
    }
}

/// Mean of `f` over `[0,1]²` (which is also its integral).
pub fn integ<F: Integrand + ?Sized>(f: &F, cfg: &QuadConfig) -> Result<Interval> {
    Ok(integ_detailed(f, cfg, false)?.value)
}

/// [`integ`] with leaf statistics and, optionally, the subdivision log.
pub fn integ_detailed<F: Integrand + ?Sized>(f: &F, cfg: &QuadConfig, keep_log: bool) -> Result<QuadOutcome> {
    cfg.validate()?;
    check_rule(f, cfg.rule)?;
    let n = recurse(f, &BoxCorners::unit(), cfg.depth, cfg.tol, cfg.rule, 0, keep_log);
    Ok(QuadOutcome {
        value: n.value,
        stats: n.stats,
        log: keep_log.then_some(SubdivisionLog { cells: n.cells }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic() -> IntegrandSpec {
        IntegrandSpec::new(|b| b.x.sqr() + b.y.sqr()).with_deriv2(|_| (Interval::point(2.0), Interval::point(2.0)))
    }

    #[test]
    fn basic_examples() {
        let five = IntegrandSpec::constant(Interval::point(5.0));
        assert_eq!(rule_basic(&five, &BoxCorners::unit()), Interval::point(5.0));
        let x = IntegrandSpec::new(|b| b.x);
        assert_eq!(rule_basic(&x, &BoxCorners::unit()), Interval::new(0.0, 1.0).unwrap());
    }

    #[test]
    fn midpoint_on_quadratic() {
        let (enc, e) = rule_midpoint(&quadratic(), &BoxCorners::unit());
        assert!(e >= 1.0 / 6.0 && e <= (1.0f64 / 6.0).next_up().next_up());
        assert!(enc.contains(2.0 / 3.0));
        assert!((enc.lo() - 1.0 / 3.0).abs() < 1e-15 && (enc.hi() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn midpoint_without_supplier_is_unavailable() {
        let x = IntegrandSpec::new(|b| b.x);
        let (enc, e) = rule_midpoint(&x, &BoxCorners::unit());
        assert!(e.is_infinite() && enc == Interval::ENTIRE);
        let cfg = QuadConfig::new(3, 1e-3, RuleKind::Midpoint);
        assert!(matches!(integ(&x, &cfg), Err(Error::MissingDerivative(_))));
    }

    #[test]
    fn simpson_examples() {
        let cubic = IntegrandSpec::new(|b| b.x.sqr() * b.x * b.y.sqr() * b.y)
            .with_deriv4(|_| (Interval::ZERO, Interval::ZERO));
        let (enc, e) = rule_simpson(&cubic, &BoxCorners::unit());
        assert!(enc.contains(1.0 / 16.0) && enc.width() <= 1e-12 && e <= 1e-12);
        let quartic = IntegrandSpec::new(|b| b.x.sqr().sqr()).with_deriv4(|_| (Interval::point(24.0), Interval::ZERO));
        let (enc, e) = rule_simpson(&quartic, &BoxCorners::unit());
        assert!(e >= 1.0 / 120.0 && e < 1.0 / 120.0 + 1e-15);
        assert!(enc.contains(0.2));
    }

    #[test]
    fn constant_integrates_exactly() {
        let one = IntegrandSpec::constant(Interval::ONE);
        for rule in [RuleKind::Basic, RuleKind::Midpoint, RuleKind::Simpson] {
            let v = integ(&one, &QuadConfig::new(5, 1e-6, rule)).unwrap();
            assert_eq!(v, Interval::ONE);
        }
    }

    #[test]
    fn adaptive_quadratic() {
        let v = integ(&quadratic(), &QuadConfig::new(6, 1e-8, RuleKind::Midpoint)).unwrap();
        assert!(v.contains(2.0 / 3.0) && v.width() <= 1e-4);
    }

    #[test]
    fn log_tiles_the_square() {
        let f = IntegrandSpec::new(|b| b.x * b.y);
        let (v, log) = mean_integ_logged(&f, &BoxCorners::unit(), 3, 0.2, RuleKind::Basic);
        assert!(v.contains(0.25));
        let area: f64 = log.cells.iter().map(|c| c.x.width() * c.y.width()).sum();
        assert!((area - 1.0).abs() < 1e-12);
        let mut buf = Vec::new();
        log.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x_lo,x_hi,y_lo,y_hi,rule,enc_lo,enc_hi,err\n"));
        assert_eq!(text.lines().count(), log.cells.len() + 1);
    }
}
