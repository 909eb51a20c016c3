//! Verified mean values over the unit square with the three rules.

use nodalsym::quad::{integ, integ_detailed, IntegrandSpec, QuadConfig, RuleKind};
use nodalsym::Interval;

fn main() -> nodalsym::Result<()> {
    // x² + y², mean 2/3, with exact second derivatives for the midpoint rule
    let quad = IntegrandSpec::new(|b| b.x.sqr() + b.y.sqr())
        .with_deriv2(|_| (Interval::point(2.0), Interval::point(2.0)))
        .with_deriv4(|_| (Interval::ZERO, Interval::ZERO));
    for rule in [RuleKind::Basic, RuleKind::Midpoint, RuleKind::Simpson] {
        let v = integ(&quad, &QuadConfig::new(6, 1e-8, rule))?;
        println!("mean(x²+y²) {rule:>8}: {}  width {:.2e}", v, v.width());
    }

    // x³y³ has nonzero fourth derivatives only through its mixed terms
    let cubic = IntegrandSpec::new(|b| {
        let (x3, y3) = (b.x.sqr() * b.x, b.y.sqr() * b.y);
        x3 * y3
    })
    .with_deriv2(|b| (b.x * 6.0 * (b.y.sqr() * b.y), b.y * 6.0 * (b.x.sqr() * b.x)))
    .with_deriv4(|_| (Interval::ZERO, Interval::ZERO));
    let v = integ(&cubic, &QuadConfig::new(0, 1e-12, RuleKind::Simpson))?;
    println!("mean(x³y³) simpson: {v:.17}  (exact 1/16)");

    // an integrand with a kink: adaptivity concentrates cells near it
    let kink = IntegrandSpec::new(|b| (b.x - 0.3).abs() * b.y);
    let out = integ_detailed(&kink, &QuadConfig::new(8, 1e-3, RuleKind::Basic), true)?;
    println!(
        "mean(|x-0.3| y) basic: {}  ({} leaves, deepest level {})",
        out.value,
        out.stats.leaves(),
        out.stats.max_level
    );
    if let Some(log) = out.log {
        let mut csv = Vec::new();
        log.write_csv(&mut csv)?;
        let text = String::from_utf8_lossy(&csv);
        println!("first cells of the subdivision log:");
        for line in text.lines().take(4) {
            println!("  {line}");
        }
    }
    Ok(())
}
