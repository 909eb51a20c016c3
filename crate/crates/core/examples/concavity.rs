//! `g″ > 0` on a θ interval, tested as `h > 1/4 + g`.

use nodalsym::prover::check_concavity;
use nodalsym::quad::{QuadConfig, RuleKind};
use nodalsym::Interval;

fn main() -> nodalsym::Result<()> {
    let cfg_g = QuadConfig::new(9, 1e-6, RuleKind::Simpson);
    let cfg_h = QuadConfig::new(8, 1e-3, RuleKind::Midpoint);
    for (lo, hi) in [(0.751367, 0.7853982), (0.7, 0.7853982), (0.0, 0.7853982)] {
        let c = check_concavity(Interval::new(lo, hi)?, &cfg_g, &cfg_h)?;
        println!(
            "θ ∈ {}: low(h) = {:.8}, high(1/4 + g) = {:.8} -> {:?}",
            c.theta_int, c.h_low, c.rhs_high, c.verdict
        );
    }
    Ok(())
}
