//! Enclosures of the entropy `g(θ)` along the family `u_θ = φ₁ cos θ − φ₂ sin θ`.
//!
//! Pass `--tight` to compute `g(π/4)` at depth 13, tol 1e-9 (about a minute).

use nodalsym::entropy::{entropy_g, entropy_g_detailed, norm_sq, ThetaFamily};
use nodalsym::quad::{QuadConfig, RuleKind};

fn main() -> nodalsym::Result<()> {
    let tight = std::env::args().any(|a| a == "--tight");
    let cfg = if tight {
        QuadConfig::new(13, 1e-9, RuleKind::Simpson)
    } else {
        QuadConfig::new(8, 1e-5, RuleKind::Simpson)
    };

    let pi4 = ThetaFamily::pi_over(4)?;
    let out = entropy_g_detailed(&pi4, &cfg, false)?;
    println!("g(π/4) = {:.12}  width {:.2e}, {} leaves", out.value, out.value.width(), out.stats.leaves());

    let coarse = QuadConfig::new(6, 1e-3, RuleKind::Simpson);
    println!("\n  θ          g(θ)");
    for k in 0..=8 {
        let fam = ThetaFamily::pi_frac(k, 16)?;
        println!("  {k:>2}π/16     {}", entropy_g(&fam, &coarse)?);
    }

    // u_θ is normalized: the mean of u_θ² over the square is 1/4
    let n = norm_sq(&ThetaFamily::pi_frac(1, 7)?, &QuadConfig::new(6, 1e-6, RuleKind::Simpson))?;
    println!("\nmean(u²) at θ = π/7: {n}");
    Ok(())
}
