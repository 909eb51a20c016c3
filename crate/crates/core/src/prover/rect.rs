//! The rectangle sweep: where does `g_γ(θ) = (3/2) sin²θ − 2 + 5γ g(θ)` attain
//! its minimum on `[0, π/2]` for `γ` in each interval `Γᵢ`?
//!
//! * At zero: `g_γ″ > 0` on `[0, δ]` (with `g_γ′(0) = 0` by symmetry) and
//!   `g_γ(θ) − g_γ(0) > 0` on `[δ, π/2]`.
//! * Interior: for a sampled `θ*`, `g_γ(θ) − g_γ(θ*) > 0` outside a survivor
//!   that avoids `0`, `π/4` and `π/2`.
//!
//! Differences are evaluated as `(3/2)(sin²θ − sin²θ_ref) + 5Γ (g(θ) − g(θ_ref))`
//! so that the width of `Γ` multiplies only the `g` difference.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact_f64;
use super::exclude::{exclude, DepthSchedule, Direction, Evaluation, ExcludeConfig, ExclusionCertificate, Objective};
use super::square::EntropyObjective;
use crate::elementary::{ipi, isin};
use crate::entropy::{g_second_from, h_fn_detailed, GammaParams, ThetaFamily};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quad::{QuadConfig, RuleKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectConfig {
    /// width of the convexity neighbourhood `[0, δ]`
    pub delta: f64,
    /// how often `δ` may be halved when convexity fails
    pub delta_halvings: u32,
    /// precision of `g` at the reference points `0` and `θ*`
    pub point_g: QuadConfig,
    /// precision of `g` and `h` in the convexity checks
    pub curvature_g: QuadConfig,
    pub curvature_h: QuadConfig,
    /// budget and schedule of every exclusion (the direction is set per use)
    pub exclusion: ExcludeConfig,
    /// grid size for locating an interior minimum
    pub samples: u32,
    pub sample_g: QuadConfig,
}

impl Default for RectConfig {
    fn default() -> Self {
        RectConfig {
            delta: 0.25,
            delta_halvings: 3,
            point_g: QuadConfig::new(9, 1e-6, RuleKind::Simpson),
            curvature_g: QuadConfig::new(9, 1e-6, RuleKind::Simpson),
            curvature_h: QuadConfig::new(8, 1e-3, RuleKind::Midpoint),
            exclusion: ExcludeConfig {
                n: 200,
                step0: None,
                schedule: DepthSchedule {
                    rule: RuleKind::Simpson,
                    stages: vec![
                        super::ScheduleStage { gap_above: 0.3, depth: 6, tol: 1e-3 },
                        super::ScheduleStage { gap_above: 0.0, depth: 7, tol: 1e-4 },
                    ],
                },
                direction: Direction::FromRight,
            },
            samples: 24,
            sample_g: QuadConfig::new(6, 1e-3, RuleKind::Simpson),
        }
    }
}

impl RectConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.samples < 2 {
            return Err(Error::Config("at least two samples are needed".into()));
        }
        for q in [self.point_g, self.curvature_g, self.curvature_h, self.sample_g] {
            q.validate()?;
        }
        self.exclusion.schedule.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RectVerdict {
    MinAtZeroVerified,
    InteriorMinVerified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroAttempt {
    #[serde(with = "exact_f64")]
    pub delta: f64,
    /// `g_Γ″` on `[0, δ]`
    pub convexity: Interval,
    /// `g(0)`, the reference value
    pub g_zero: Interval,
    pub exclusion: Option<ExclusionCertificate>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorAttempt {
    #[serde(with = "exact_f64")]
    pub theta_star: f64,
    /// `g(θ*)`, the reference value
    pub g_star: Interval,
    pub left: ExclusionCertificate,
    pub right: ExclusionCertificate,
    pub survivor: Option<Interval>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaCertificate {
    pub gamma: Interval,
    pub verdict: RectVerdict,
    /// `g_Γ″(0)`
    pub g2_at_zero: Interval,
    pub at_zero: ZeroAttempt,
    pub interior: Option<InteriorAttempt>,
    /// the interval known to contain every minimizer
    pub survivor: Option<Interval>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleSweepReport {
    pub config: RectConfig,
    pub results: Vec<GammaCertificate>,
    /// `(largest γ verified at zero, smallest γ verified interior)`
    pub transition: Option<(f64, f64)>,
}

/// `(3/2)(sin²θ − sin²θ_ref) + 5Γ (g(θ) − g_ref)`.
struct Difference<'a> {
    gamma: Interval,
    s2_ref: Interval,
    g_ref: Interval,
    cache: &'a GCache,
}

impl Objective for Difference<'_> {
    fn eval(&self, x: Interval, q: &QuadConfig) -> Result<Evaluation> {
        let g = self.cache.g(x, q)?;
        let trig = (isin(x).sqr() - self.s2_ref) * 1.5;
        Ok(Evaluation {
            value: trig + self.gamma * 5.0 * (g.value - self.g_ref),
            leaves: g.leaves,
        })
    }
}

type Key = (u64, u64, u32, u64, RuleKind);

/// Memoized `g` evaluations; they do not depend on `Γ`.
#[derive(Default)]
struct GCache {
    g: Mutex<HashMap<Key, Evaluation>>,
    h: Mutex<HashMap<Key, Interval>>,
}

fn key(x: Interval, q: &QuadConfig) -> Key {
    (x.lo().to_bits(), x.hi().to_bits(), q.depth, q.tol.to_bits(), q.rule)
}

impl GCache {
    fn g(&self, x: Interval, q: &QuadConfig) -> Result<Evaluation> {
        let k = key(x, q);
        if let Some(e) = self.g.lock().expect("cache lock").get(&k) {
            return Ok(*e);
        }
        let e = EntropyObjective.eval(x, q)?;
        self.g.lock().expect("cache lock").insert(k, e);
        Ok(e)
    }

    fn h(&self, x: Interval, q: &QuadConfig) -> Result<Interval> {
        let k = key(x, q);
        if let Some(e) = self.h.lock().expect("cache lock").get(&k) {
            return Ok(*e);
        }
        let e = h_fn_detailed(&ThetaFamily::new(x)?, q, false)?.value;
        self.h.lock().expect("cache lock").insert(k, e);
        Ok(e)
    }

    /// `g″` on `x`.
    fn g2(&self, x: Interval, cfg: &RectConfig) -> Result<Interval> {
        let g = self.g(x, &cfg.curvature_g)?.value;
        let h = self.h(x, &cfg.curvature_h)?;
        Ok(g_second_from(g, h))
    }
}

fn half_pi_hi() -> f64 {
    (ipi() / 2.0).hi()
}

fn zero_exclusion(
    gp: &GammaParams,
    delta: f64,
    g_zero: Interval,
    cfg: &RectConfig,
    cache: &GCache,
) -> Result<ExclusionCertificate> {
    let d = Difference {
        gamma: gp.gamma(),
        s2_ref: Interval::ZERO,
        g_ref: g_zero,
        cache,
    };
    let ex = ExcludeConfig {
        direction: Direction::FromRight,
        ..cfg.exclusion.clone()
    };
    exclude(&d, delta, half_pi_hi(), &ex, 0.0)
}

fn try_zero(gp: &GammaParams, cfg: &RectConfig, cache: &GCache, g_zero: Interval) -> Result<ZeroAttempt> {
    let mut delta = cfg.delta;
    let mut last = None;
    for _ in 0..=cfg.delta_halvings {
        let theta = Interval::new(0.0, delta)?;
        let convexity = gp.g_gamma_second_from(theta, cache.g2(theta, cfg)?);
        if convexity.lo() > 0.0 {
            let ex = zero_exclusion(gp, delta, g_zero, cfg, cache)?;
            let verified = ex.survivor.is_none();
            return Ok(ZeroAttempt {
                delta,
                convexity,
                g_zero,
                exclusion: Some(ex),
                verified,
            });
        }
        last = Some(ZeroAttempt {
            delta,
            convexity,
            g_zero,
            exclusion: None,
            verified: false,
        });
        delta *= 0.5;
    }
    Ok(last.expect("at least one attempt"))
}

/// A sampled guess of the minimizer of `g_γ` at the midpoint of `Γ`.
fn sample_argmin(gp: &GammaParams, cfg: &RectConfig, cache: &GCache) -> Result<Option<f64>> {
    let gamma = Interval::point(gp.gamma().midpoint());
    let step = std::f64::consts::FRAC_PI_2 / cfg.samples as f64;
    let mut best: Option<(f64, f64)> = None;
    for k in 0..=cfg.samples {
        let t = Interval::point(step * k as f64);
        let g = cache.g(t, &cfg.sample_g)?.value;
        let v = GammaParams::new(gamma)?.g_gamma_from(t, g).midpoint();
        if best.map_or(true, |(_, b)| v < b) {
            best = Some((t.lo(), v));
        }
    }
    Ok(best.map(|(t, _)| t).filter(|&t| t > 0.0 && t < std::f64::consts::FRAC_PI_2))
}

fn interior_exclusions(
    gp: &GammaParams,
    theta_star: f64,
    g_star: Interval,
    cfg: &RectConfig,
    cache: &GCache,
) -> Result<(ExclusionCertificate, ExclusionCertificate)> {
    let d = Difference {
        gamma: gp.gamma(),
        s2_ref: isin(Interval::point(theta_star)).sqr(),
        g_ref: g_star,
        cache,
    };
    let left_cfg = ExcludeConfig {
        direction: Direction::FromLeft,
        ..cfg.exclusion.clone()
    };
    let right_cfg = ExcludeConfig {
        direction: Direction::FromRight,
        ..cfg.exclusion.clone()
    };
    let left = exclude(&d, 0.0, theta_star, &left_cfg, 0.0)?;
    let right = exclude(&d, theta_star, half_pi_hi(), &right_cfg, 0.0)?;
    Ok((left, right))
}

fn interior_survivor(left: &ExclusionCertificate, right: &ExclusionCertificate) -> Option<Interval> {
    match (left.survivor, right.survivor) {
        (Some(l), Some(r)) => Some(l.hull(&r)),
        (Some(s), None) | (None, Some(s)) => Some(s),
        (None, None) => None,
    }
}

/// The survivor avoids `0`, `π/4` and `π/2`.
fn is_interior(s: Interval) -> bool {
    let pi = ipi();
    s.lo() > 0.0 && s.disjoint(&(pi / 4.0)) && s.disjoint(&(pi / 2.0))
}

fn try_interior(gp: &GammaParams, cfg: &RectConfig, cache: &GCache) -> Result<Option<InteriorAttempt>> {
    let Some(theta_star) = sample_argmin(gp, cfg, cache)? else {
        return Ok(None);
    };
    let g_star = cache.g(Interval::point(theta_star), &cfg.point_g)?.value;
    let (left, right) = interior_exclusions(gp, theta_star, g_star, cfg, cache)?;
    let survivor = interior_survivor(&left, &right);
    Ok(Some(InteriorAttempt {
        theta_star,
        g_star,
        verified: survivor.is_some_and(is_interior),
        left,
        right,
        survivor,
    }))
}

fn decide(at_zero: &ZeroAttempt, interior: &Option<InteriorAttempt>) -> (RectVerdict, Option<Interval>, Option<String>) {
    if at_zero.verified {
        return (RectVerdict::MinAtZeroVerified, Some(Interval::raw(0.0, at_zero.delta)), None);
    }
    if let Some(i) = interior {
        if i.verified {
            return (RectVerdict::InteriorMinVerified, i.survivor, None);
        }
    }
    let reason = match interior {
        None => "no interior minimum sampled and the minimum at 0 was not verified".to_string(),
        Some(i) => format!(
            "minimum at 0 not verified (g″ on [0, {}] ⊆ {}); interior survivor {:?} is not separated from 0, π/4, π/2",
            at_zero.delta, at_zero.convexity, i.survivor
        ),
    };
    (RectVerdict::Inconclusive, None, Some(reason))
}

fn prove_gamma(gamma: Interval, cfg: &RectConfig, cache: &GCache, g0: Interval, g2_zero: Interval) -> Result<GammaCertificate> {
    let gp = GammaParams::new(gamma)?;
    let at_zero = try_zero(&gp, cfg, cache, g0)?;
    let interior = if at_zero.verified {
        None
    } else {
        try_interior(&gp, cfg, cache)?
    };
    let (verdict, survivor, reason) = decide(&at_zero, &interior);
    Ok(GammaCertificate {
        gamma,
        verdict,
        g2_at_zero: gp.g_gamma_second_from(Interval::ZERO, g2_zero),
        at_zero,
        interior,
        survivor,
        reason,
    })
}

fn transition(results: &[GammaCertificate]) -> Option<(f64, f64)> {
    let zero = results
        .iter()
        .filter(|r| r.verdict == RectVerdict::MinAtZeroVerified)
        .map(|r| r.gamma.hi())
        .reduce(f64::max)?;
    let interior = results
        .iter()
        .filter(|r| r.verdict == RectVerdict::InteriorMinVerified)
        .map(|r| r.gamma.lo())
        .reduce(f64::min)?;
    Some((zero, interior))
}

/// Certifies the location of the minimum for each `Γ` in `gammas`.
pub fn prove_rectangle_intervals(gammas: &[Interval], cfg: &RectConfig) -> Result<RectangleSweepReport> {
    cfg.validate()?;
    for g in gammas {
        GammaParams::new(*g)?;
    }
    let cache = GCache::default();
    let zero = Interval::ZERO;
    let g0 = cache.g(zero, &cfg.point_g)?.value;
    let g2_zero = cache.g2(zero, cfg)?;
    let results = gammas
        .par_iter()
        .map(|g| prove_gamma(*g, cfg, &cache, g0, g2_zero))
        .collect::<Result<Vec<_>>>()?;
    Ok(RectangleSweepReport {
        config: cfg.clone(),
        transition: transition(&results),
        results,
    })
}

/// Tiles `[0, gamma_max]` into `n_gamma` equal intervals and certifies each.
pub fn prove_rectangle(gamma_max: f64, n_gamma: u32, cfg: &RectConfig) -> Result<RectangleSweepReport> {
    if !(gamma_max > 0.0 && gamma_max.is_finite()) || n_gamma == 0 {
        return Err(Error::Config(format!(
            "need gamma_max > 0 and n_gamma >= 1, got {gamma_max} and {n_gamma}"
        )));
    }
    let top = Interval::point(gamma_max);
    let n = n_gamma as f64;
    let gammas = (0..n_gamma)
        .map(|i| {
            let lo = if i == 0 { 0.0 } else { (top * i as f64 / n).lo() };
            let hi = if i + 1 == n_gamma { gamma_max } else { (top * (i + 1) as f64 / n).hi() };
            Interval::new(lo, hi)
        })
        .collect::<Result<Vec<_>>>()?;
    prove_rectangle_intervals(&gammas, cfg)
}

impl RectangleSweepReport {
    /// Recomputes every recorded enclosure and exclusion and the verdicts.
    pub fn replay(&self) -> Result<()> {
        let mismatch = |m: String| Err(Error::Mismatch(m));
        let cfg = &self.config;
        let cache = GCache::default();
        let g0 = cache.g(Interval::ZERO, &cfg.point_g)?.value;
        let g2_zero = cache.g2(Interval::ZERO, cfg)?;
        for r in &self.results {
            let gp = GammaParams::new(r.gamma)?;
            if gp.g_gamma_second_from(Interval::ZERO, g2_zero) != r.g2_at_zero {
                return mismatch(format!("g_Γ″(0) differs for Γ = {}", r.gamma));
            }
            let z = &r.at_zero;
            if z.g_zero != g0 {
                return mismatch("g(0) differs".into());
            }
            let theta = Interval::new(0.0, z.delta)?;
            if gp.g_gamma_second_from(theta, cache.g2(theta, cfg)?) != z.convexity {
                return mismatch(format!("convexity enclosure differs for Γ = {}", r.gamma));
            }
            if let Some(ex) = &z.exclusion {
                if ex.x_lo != z.delta || ex.m_bar != 0.0 || ex.direction != Direction::FromRight {
                    return mismatch("zero exclusion has the wrong range".into());
                }
                let d = Difference {
                    gamma: r.gamma,
                    s2_ref: Interval::ZERO,
                    g_ref: g0,
                    cache: &cache,
                };
                ex.replay(&d)?;
            }
            if z.verified != (z.convexity.lo() > 0.0 && z.exclusion.as_ref().is_some_and(|e| e.survivor.is_none())) {
                return mismatch("zero verdict differs".into());
            }
            if let Some(i) = &r.interior {
                let g_star = cache.g(Interval::point(i.theta_star), &cfg.point_g)?.value;
                if g_star != i.g_star {
                    return mismatch("g(θ*) differs".into());
                }
                let d = Difference {
                    gamma: r.gamma,
                    s2_ref: isin(Interval::point(i.theta_star)).sqr(),
                    g_ref: g_star,
                    cache: &cache,
                };
                if i.left.x_lo != 0.0 || i.left.x_hi != i.theta_star || i.right.x_lo != i.theta_star {
                    return mismatch("interior exclusions have the wrong ranges".into());
                }
                i.left.replay(&d)?;
                i.right.replay(&d)?;
                let s = interior_survivor(&i.left, &i.right);
                if s != i.survivor || i.verified != s.is_some_and(is_interior) {
                    return mismatch("interior survivor differs".into());
                }
            }
            let (verdict, survivor, _) = decide(z, &r.interior);
            if verdict != r.verdict || survivor != r.survivor {
                return mismatch(format!("verdict differs for Γ = {}", r.gamma));
            }
        }
        if transition(&self.results) != self.transition {
            return mismatch("transition bracket differs".into());
        }
        Ok(())
    }
}
