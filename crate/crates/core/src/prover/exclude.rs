//! Branch-and-bound exclusion of parameter intervals.
//!
//! Starting from one end of `[x_lo, x_hi]`, a candidate interval of the
//! current step length is discarded when the lower end of the objective's
//! enclosure exceeds a reference value `m̄`. A failed candidate halves the
//! step; a successful one advances the moving endpoint. What remains is the
//! survivor, which contains every point where the objective can be `≤ m̄`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact_f64;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quad::{QuadConfig, RuleKind};

/// An objective evaluation: the enclosure and the number of quadrature leaves spent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Interval,
    pub leaves: u64,
}

impl Evaluation {
    pub fn exact(value: Interval) -> Self {
        Evaluation { value, leaves: 0 }
    }
}

/// An interval objective whose precision is chosen by a [`QuadConfig`].
pub trait Objective: Sync {
    fn eval(&self, x: Interval, q: &QuadConfig) -> Result<Evaluation>;
}

impl<F> Objective for F
where
    F: Fn(Interval, &QuadConfig) -> Result<Evaluation> + Sync,
{
    fn eval(&self, x: Interval, q: &QuadConfig) -> Result<Evaluation> {
        self(x, q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    FromLeft,
    FromRight,
}

/// Quadrature precision used while the remaining gap exceeds `gap_above`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleStage {
    pub gap_above: f64,
    pub depth: u32,
    pub tol: f64,
}

/// Precision as a function of the width of the not-yet-excluded range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthSchedule {
    pub rule: RuleKind,
    pub stages: Vec<ScheduleStage>,
}

impl DepthSchedule {
    pub fn new(rule: RuleKind, stages: Vec<ScheduleStage>) -> Result<Self> {
        let s = DepthSchedule { rule, stages };
        s.validate()?;
        Ok(s)
    }

    /// Coarse far from the square's minimizer, precise near it.
    pub fn square_default() -> Self {
        DepthSchedule {
            rule: RuleKind::Simpson,
            stages: vec![
                ScheduleStage { gap_above: 0.3, depth: 7, tol: 1e-4 },
                ScheduleStage { gap_above: 0.05, depth: 9, tol: 1e-6 },
                ScheduleStage { gap_above: 0.0, depth: 11, tol: 1e-8 },
            ],
        }
    }

    /// A single stage at fixed precision.
    pub fn fixed(depth: u32, tol: f64, rule: RuleKind) -> Self {
        DepthSchedule {
            rule,
            stages: vec![ScheduleStage { gap_above: 0.0, depth, tol }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("depth schedule: {m}")));
        if self.stages.is_empty() {
            return bad("no stages");
        }
        for w in self.stages.windows(2) {
            if w[1].gap_above >= w[0].gap_above {
                return bad("gap thresholds must decrease");
            }
            if w[1].depth < w[0].depth {
                return bad("depths must not decrease as the gap shrinks");
            }
        }
        if self.stages.last().map(|s| s.gap_above) != Some(0.0) {
            return bad("the last stage must cover every gap (gap_above = 0)");
        }
        for s in &self.stages {
            QuadConfig::new(s.depth, s.tol, self.rule).validate()?;
        }
        Ok(())
    }

    pub fn config_for(&self, gap: f64) -> QuadConfig {
        let stage = self
            .stages
            .iter()
            .find(|s| gap > s.gap_above)
            .or(self.stages.last())
            .expect("validated schedule is non-empty");
        QuadConfig::new(stage.depth, stage.tol, self.rule)
    }

    /// Replaces every depth and/or tolerance.
    pub fn overridden(&self, depth: Option<u32>, tol: Option<f64>) -> Self {
        let mut s = self.clone();
        for st in &mut s.stages {
            st.depth = depth.unwrap_or(st.depth);
            st.tol = tol.unwrap_or(st.tol);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcludeConfig {
    pub n: u32,
    /// Initial step; `None` means an eighth of the range.
    pub step0: Option<f64>,
    pub schedule: DepthSchedule,
    pub direction: Direction,
}

impl ExcludeConfig {
    pub fn square_default() -> Self {
        ExcludeConfig {
            n: 100,
            step0: None,
            schedule: DepthSchedule::square_default(),
            direction: Direction::FromLeft,
        }
    }
}

/// A discarded interval with the enclosure that justified it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcludedInterval {
    pub interval: Interval,
    pub enclosure: Interval,
    pub depth: u32,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExclusionCertificate {
    #[serde(with = "exact_f64")]
    pub x_lo: f64,
    #[serde(with = "exact_f64")]
    pub x_hi: f64,
    #[serde(with = "exact_f64")]
    pub m_bar: f64,
    #[serde(with = "exact_f64")]
    pub step0: f64,
    pub direction: Direction,
    pub rule: RuleKind,
    pub excluded: Vec<ExcludedInterval>,
    /// `None` when the whole range was excluded.
    pub survivor: Option<Interval>,
    pub iterations_used: u32,
    pub leaves: u64,
}

/// Runs the exclusion iteration on `[x_lo, x_hi]` against `m_bar`.
pub fn exclude<G: Objective + ?Sized>(
    g: &G,
    x_lo: f64,
    x_hi: f64,
    cfg: &ExcludeConfig,
    m_bar: f64,
) -> Result<ExclusionCertificate> {
    if !(x_lo < x_hi) || !x_lo.is_finite() || !x_hi.is_finite() {
        return Err(Error::Config(format!("exclusion range [{x_lo}, {x_hi}] is empty or unbounded")));
    }
    if !m_bar.is_finite() {
        return Err(Error::Config("reference value m̄ must be finite".into()));
    }
    cfg.schedule.validate()?;
    let step0 = cfg.step0.unwrap_or((x_hi - x_lo) / 8.0);
    if !(step0 > 0.0) {
        return Err(Error::Config(format!("initial step must be positive, got {step0}")));
    }
    let (mut lo, mut hi) = (x_lo, x_hi);
    let mut step = step0;
    let mut excluded = Vec::new();
    let mut iterations = 0;
    let mut leaves = 0;
    let mut open = true;
    while open && iterations < cfg.n {
        let (a, b) = match cfg.direction {
            Direction::FromLeft => (lo, (lo + step).min(hi)),
            Direction::FromRight => ((hi - step).max(lo), hi),
        };
        if a >= b {
            // the step no longer moves the endpoint
            break;
        }
        iterations += 1;
        let q = cfg.schedule.config_for(hi - lo);
        let cand = Interval::new(a, b)?;
        let e = g.eval(cand, &q)?;
        leaves += e.leaves;
        if e.value.lo() > m_bar {
            excluded.push(ExcludedInterval {
                interval: cand,
                enclosure: e.value,
                depth: q.depth,
                tol: q.tol,
            });
            match cfg.direction {
                Direction::FromLeft => lo = b,
                Direction::FromRight => hi = a,
            }
            open = lo < hi;
        } else {
            step *= 0.5;
        }
    }
    Ok(ExclusionCertificate {
        x_lo,
        x_hi,
        m_bar,
        step0,
        direction: cfg.direction,
        rule: cfg.schedule.rule,
        excluded,
        survivor: open.then(|| Interval::raw(lo, hi)),
        iterations_used: iterations,
        leaves,
    })
}

impl ExclusionCertificate {
    /// Checks that the excluded intervals and the survivor tile the range.
    pub fn check_coverage(&self) -> Result<()> {
        let mismatch = |m: String| Err(Error::Mismatch(m));
        let mut edge = match self.direction {
            Direction::FromLeft => self.x_lo,
            Direction::FromRight => self.x_hi,
        };
        for e in &self.excluded {
            let (near, far) = match self.direction {
                Direction::FromLeft => (e.interval.lo(), e.interval.hi()),
                Direction::FromRight => (e.interval.hi(), e.interval.lo()),
            };
            if near != edge {
                return mismatch(format!("excluded interval {} does not continue at {edge}", e.interval));
            }
            edge = far;
        }
        let expected = match self.direction {
            Direction::FromLeft => (edge < self.x_hi).then(|| Interval::raw(edge, self.x_hi)),
            Direction::FromRight => (edge > self.x_lo).then(|| Interval::raw(self.x_lo, edge)),
        };
        if expected != self.survivor {
            return mismatch(format!("survivor {:?} should be {:?}", self.survivor, expected));
        }
        Ok(())
    }

    /// Re-evaluates every excluded interval, requiring bit-identical
    /// enclosures and the strict inequality against `m̄`.
    pub fn replay<G: Objective + ?Sized>(&self, g: &G) -> Result<()> {
        self.check_coverage()?;
        // independent re-evaluations; the first failure in list order is reported
        let checks: Vec<Result<()>> = self.excluded.par_iter().map(|e| self.replay_one(g, e)).collect();
        checks.into_iter().collect()
    }

    fn replay_one<G: Objective + ?Sized>(&self, g: &G, e: &ExcludedInterval) -> Result<()> {
        let q = QuadConfig::new(e.depth, e.tol, self.rule);
        let v = g.eval(e.interval, &q)?.value;
        if v.lo().to_bits() != e.enclosure.lo().to_bits() || v.hi().to_bits() != e.enclosure.hi().to_bits() {
            return Err(Error::Mismatch(format!(
                "enclosure on {} recomputes to {} instead of {}",
                e.interval.to_hex_string(),
                v.to_hex_string(),
                e.enclosure.to_hex_string()
            )));
        }
        if !(v.lo() > self.m_bar) {
            return Err(Error::Mismatch(format!("{} does not exceed m̄ on {}", v, e.interval)));
        }
        Ok(())
    }
}
