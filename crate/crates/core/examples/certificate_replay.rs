//! Serialize a certificate, replay it, and watch a forged one fail.

use nodalsym::prover::{check_concavity, Certificate, CertificateBody};
use nodalsym::quad::{QuadConfig, RuleKind};
use nodalsym::Interval;

fn main() -> nodalsym::Result<()> {
    let c = check_concavity(
        Interval::new(0.751367, 0.7853982)?,
        &QuadConfig::new(8, 1e-5, RuleKind::Simpson),
        &QuadConfig::new(7, 1e-3, RuleKind::Midpoint),
    )?;
    let json = Certificate::new(CertificateBody::Concavity(c)).to_json()?;
    println!("{json}");

    let cert = Certificate::from_json(&json)?;
    cert.replay()?;
    println!("replayed bit for bit; verified: {}", cert.is_verified());

    // claim a better lower bound for h than was computed
    let mut forged = cert.clone();
    if let CertificateBody::Concavity(c) = &mut forged.body {
        c.h_low += 0.01;
    }
    match Certificate::from_json(&forged.to_json()?)?.replay() {
        Ok(()) => println!("forged certificate accepted (unexpected)"),
        Err(e) => println!("forged certificate rejected: {e}"),
    }
    Ok(())
}
