//! The serialized envelope around every report, and its replay.

use serde::{Deserialize, Serialize};

use super::{check_concavity, ConcavityCertificate, EntropyObjective, ExclusionCertificate};
use super::{RectangleSweepReport, SquareProofReport};
use crate::error::{Error, Result};

pub const TOOL: &str = "nodalsym";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "report", rename_all = "snake_case")]
pub enum CertificateBody {
    Square(SquareProofReport),
    Rectangle(RectangleSweepReport),
    /// An exclusion of the entropy `g`.
    Exclusion(ExclusionCertificate),
    Concavity(ConcavityCertificate),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool: String,
    pub version: String,
    /// total wall-clock seconds; omitted unless asked for
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    #[serde(flatten)]
    pub body: CertificateBody,
}

impl Certificate {
    pub fn new(body: CertificateBody) -> Self {
        Certificate {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            wall_time_s: None,
            body,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Certificate = serde_json::from_str(s)?;
        if c.tool != TOOL {
            return Err(Error::Parse(format!("not a {TOOL} certificate (tool = {:?})", c.tool)));
        }
        Ok(c)
    }

    /// Recomputes the certificate. `Ok` means every recorded enclosure and
    /// verdict was reproduced bit for bit; the verdict itself may still be
    /// inconclusive.
    pub fn replay(&self) -> Result<()> {
        match &self.body {
            CertificateBody::Square(r) => r.replay(),
            CertificateBody::Rectangle(r) => r.replay(),
            CertificateBody::Exclusion(e) => e.replay(&EntropyObjective),
            CertificateBody::Concavity(c) => {
                let again = check_concavity(c.theta_int, &c.cfg_g, &c.cfg_h)?;
                if &again != c {
                    return Err(Error::Mismatch(format!(
                        "concavity recomputes to h = {}, g = {}",
                        again.h.to_hex_string(),
                        again.g.to_hex_string()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Whether the certified statement holds.
    pub fn is_verified(&self) -> bool {
        match &self.body {
            CertificateBody::Square(r) => r.verdict.is_verified(),
            CertificateBody::Rectangle(r) => r.results.iter().all(|g| g.verdict != super::RectVerdict::Inconclusive),
            CertificateBody::Exclusion(e) => !e.excluded.is_empty(),
            CertificateBody::Concavity(c) => c.verdict.is_verified(),
        }
    }
}
