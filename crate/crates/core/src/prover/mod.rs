//! Certificates: exclusion, concavity, the square proof and the rectangle sweep.

mod certificate;
mod exclude;
mod rect;
mod square;

pub use certificate::{Certificate, CertificateBody, TOOL};
pub use exclude::{
    exclude, DepthSchedule, Direction, Evaluation, ExcludeConfig, ExcludedInterval, ExclusionCertificate, Objective,
    ScheduleStage,
};
pub use rect::{
    prove_rectangle, prove_rectangle_intervals, GammaCertificate, InteriorAttempt, RectConfig, RectVerdict,
    RectangleSweepReport, ZeroAttempt,
};
pub use square::{
    check_concavity, prove_square, ConcavityCertificate, EntropyObjective, EvalCounts, SquareConfig,
    SquareProofReport, StageTimings,
};

use serde::{Deserialize, Serialize};

/// Outcome of a one-sided verified test. Failure never means the statement is false.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Verified
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn is_verified(self) -> bool {
        self == Verdict::Verified
    }
}

/// Serializes an `f64` as its shortest decimal plus the exact hex-float,
/// so that infinite bounds survive JSON.
pub(crate) mod exact_f64 {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::interval::{format_hex, parse_hex};

    #[derive(Serialize, Deserialize)]
    struct Exact {
        dec: String,
        hex: String,
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        let dec = if x.is_infinite() {
            if *x > 0.0 { "inf".into() } else { "-inf".into() }
        } else {
            format!("{x:?}")
        };
        Exact { dec, hex: format_hex(*x) }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let e = Exact::deserialize(d)?;
        parse_hex(&e.hex).map_err(D::Error::custom)
    }
}
