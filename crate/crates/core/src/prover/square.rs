//! The square: `θ = π/4` minimizes `g` on `[0, π/4]` and `g″ > 0` around it.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::exact_f64;
use super::exclude::{exclude, Evaluation, ExcludeConfig, ExclusionCertificate, Objective};
use super::Verdict;
use crate::elementary::ipi;
use crate::entropy::{entropy_g_detailed, h_fn_detailed, ThetaFamily};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quad::{QuadConfig, RuleKind};

/// `θ ↦ g(θ)` at the requested precision.
pub struct EntropyObjective;

impl Objective for EntropyObjective {
    fn eval(&self, x: Interval, q: &QuadConfig) -> Result<Evaluation> {
        let out = entropy_g_detailed(&ThetaFamily::new(x)?, q, false)?;
        Ok(Evaluation {
            value: out.value,
            leaves: out.stats.leaves(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareConfig {
    /// precision of `g(π/4)`, whose upper end is the reference value m̄
    pub g_pi4: QuadConfig,
    pub exclusion: ExcludeConfig,
    /// precision of `g` on the survivor
    pub concavity_g: QuadConfig,
    /// precision of `h` on the survivor
    pub concavity_h: QuadConfig,
}

impl Default for SquareConfig {
    fn default() -> Self {
        SquareConfig {
            g_pi4: QuadConfig::new(13, 1e-9, RuleKind::Simpson),
            exclusion: ExcludeConfig::square_default(),
            concavity_g: QuadConfig::new(9, 1e-6, RuleKind::Simpson),
            concavity_h: QuadConfig::new(8, 1e-3, RuleKind::Midpoint),
        }
    }
}

impl SquareConfig {
    /// Applies one depth and/or tolerance to every stage.
    pub fn overridden(&self, depth: Option<u32>, tol: Option<f64>) -> Self {
        let q = |c: QuadConfig| QuadConfig::new(depth.unwrap_or(c.depth), tol.unwrap_or(c.tol), c.rule);
        let mut out = self.clone();
        out.g_pi4 = q(self.g_pi4);
        out.concavity_g = q(self.concavity_g);
        out.concavity_h = q(self.concavity_h);
        out.exclusion.schedule = self.exclusion.schedule.overridden(depth, tol);
        out
    }

    pub fn validate(&self) -> Result<()> {
        self.g_pi4.validate()?;
        self.concavity_g.validate()?;
        self.concavity_h.validate()?;
        self.exclusion.schedule.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcavityCertificate {
    pub theta_int: Interval,
    pub g: Interval,
    pub h: Interval,
    #[serde(with = "exact_f64")]
    pub h_low: f64,
    #[serde(with = "exact_f64")]
    pub rhs_high: f64,
    pub verdict: Verdict,
    pub cfg_g: QuadConfig,
    pub cfg_h: QuadConfig,
    pub leaves: u64,
}

/// Tests `h(θ) > 1/4 + g(θ)` on `theta_int`, i.e. `g″ > 0` there.
pub fn check_concavity(theta_int: Interval, cfg_g: &QuadConfig, cfg_h: &QuadConfig) -> Result<ConcavityCertificate> {
    let fam = ThetaFamily::new(theta_int)?;
    let h = h_fn_detailed(&fam, cfg_h, false)?;
    let g = entropy_g_detailed(&fam, cfg_g, false)?;
    let h_low = h.value.lo();
    let rhs_high = (g.value + 0.25).hi();
    Ok(ConcavityCertificate {
        theta_int,
        g: g.value,
        h: h.value,
        h_low,
        rhs_high,
        verdict: Verdict::from_bool(h_low > rhs_high),
        cfg_g: *cfg_g,
        cfg_h: *cfg_h,
        leaves: g.stats.leaves() + h.stats.leaves(),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub g_pi4_leaves: u64,
    pub exclusion_evaluations: u32,
    pub exclusion_leaves: u64,
    pub concavity_leaves: u64,
}

/// Wall-clock seconds per stage. Not reproducible, so optional in certificates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub g_pi4: f64,
    pub exclusion: f64,
    pub concavity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareProofReport {
    pub config: SquareConfig,
    pub pi_over_4: Interval,
    pub g_at_pi4: Interval,
    #[serde(with = "exact_f64")]
    pub m_bar: f64,
    pub exclusion: ExclusionCertificate,
    pub concavity: Option<ConcavityCertificate>,
    pub verdict: Verdict,
    pub failed_stage: Option<String>,
    pub eval_counts: EvalCounts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<StageTimings>,
}

/// Why the exclusion stage does not support the claim, if it does not.
fn exclusion_failure(ex: &ExclusionCertificate, pi4: Interval) -> Option<String> {
    match ex.survivor {
        None => Some("exclusion: the whole range was excluded, which contradicts g(π/4) ≤ m̄".into()),
        Some(s) if !pi4.subset_of(&s) => Some(format!("exclusion: survivor {s} does not contain π/4")),
        Some(s) if s.lo() <= 0.0 => Some(format!(
            "exclusion: nothing excluded after {} iterations; survivor {s} still touches 0",
            ex.iterations_used
        )),
        Some(_) => None,
    }
}

fn verdict_of(ex: &ExclusionCertificate, conc: &Option<ConcavityCertificate>, pi4: Interval) -> (Verdict, Option<String>) {
    if let Some(f) = exclusion_failure(ex, pi4) {
        return (Verdict::Inconclusive, Some(f));
    }
    match conc {
        Some(c) if c.verdict.is_verified() => (Verdict::Verified, None),
        Some(c) => (
            Verdict::Inconclusive,
            Some(format!(
                "concavity: h_low = {} does not exceed high(1/4 + g) = {}",
                c.h_low, c.rhs_high
            )),
        ),
        None => (Verdict::Inconclusive, Some("concavity: not evaluated".into())),
    }
}

/// Runs the three stages: `g(π/4)`, exclusion on `[0, π/4]`, concavity on the survivor.
pub fn prove_square(cfg: &SquareConfig) -> Result<SquareProofReport> {
    cfg.validate()?;
    let pi4 = ipi() / 4.0;

    let t = Instant::now();
    let g = entropy_g_detailed(&ThetaFamily::new(pi4)?, &cfg.g_pi4, false)?;
    let m_bar = g.value.hi();
    let t_g = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let ex = exclude(&EntropyObjective, 0.0, pi4.hi(), &cfg.exclusion, m_bar)?;
    let t_ex = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let concavity = match ex.survivor {
        Some(s) => Some(check_concavity(s, &cfg.concavity_g, &cfg.concavity_h)?),
        None => None,
    };
    let t_c = t.elapsed().as_secs_f64();

    let (verdict, failed_stage) = verdict_of(&ex, &concavity, pi4);
    Ok(SquareProofReport {
        config: cfg.clone(),
        pi_over_4: pi4,
        g_at_pi4: g.value,
        m_bar,
        eval_counts: EvalCounts {
            g_pi4_leaves: g.stats.leaves(),
            exclusion_evaluations: ex.iterations_used,
            exclusion_leaves: ex.leaves,
            concavity_leaves: concavity.as_ref().map_or(0, |c| c.leaves),
        },
        exclusion: ex,
        concavity,
        verdict,
        failed_stage,
        timings: Some(StageTimings {
            g_pi4: t_g,
            exclusion: t_ex,
            concavity: t_c,
        }),
    })
}

impl SquareProofReport {
    /// Recomputes every recorded enclosure from the echoed configuration and
    /// checks bit-identity, the inequalities and the verdict.
    pub fn replay(&self) -> Result<()> {
        let mismatch = |m: String| Err(Error::Mismatch(m));
        let pi4 = ipi() / 4.0;
        if self.pi_over_4 != pi4 {
            return mismatch("π/4 enclosure differs".into());
        }
        let g = entropy_g_detailed(&ThetaFamily::new(pi4)?, &self.config.g_pi4, false)?;
        if g.value != self.g_at_pi4 || self.m_bar != g.value.hi() {
            return mismatch(format!("g(π/4) recomputes to {}", g.value.to_hex_string()));
        }
        let ex = &self.exclusion;
        if ex.x_lo != 0.0 || ex.x_hi != pi4.hi() || ex.m_bar != self.m_bar {
            return mismatch("exclusion range or reference value differs".into());
        }
        ex.replay(&EntropyObjective)?;
        let concavity = match (&self.concavity, ex.survivor) {
            (Some(c), Some(s)) => {
                if c.theta_int != s {
                    return mismatch("concavity was checked on another interval than the survivor".into());
                }
                let again = check_concavity(s, &c.cfg_g, &c.cfg_h)?;
                if &again != c {
                    return mismatch(format!("concavity recomputes to h = {}, g = {}", again.h, again.g));
                }
                Some(again)
            }
            (None, None) => None,
            _ => return mismatch("concavity record does not match the survivor".into()),
        };
        let (verdict, failed) = verdict_of(ex, &concavity, pi4);
        if verdict != self.verdict || failed != self.failed_stage {
            return mismatch(format!("verdict recomputes to {verdict:?}"));
        }
        Ok(())
    }
}
