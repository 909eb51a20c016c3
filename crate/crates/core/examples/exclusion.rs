//! Branch-and-bound exclusion, first on a toy objective, then on `g`.

use nodalsym::elementary::ipi;
use nodalsym::entropy::{entropy_g, ThetaFamily};
use nodalsym::prover::{exclude, DepthSchedule, Direction, EntropyObjective, Evaluation, ExcludeConfig};
use nodalsym::quad::{QuadConfig, RuleKind};
use nodalsym::Interval;

fn main() -> nodalsym::Result<()> {
    let parabola = |x: Interval, _: &QuadConfig| Ok(Evaluation::exact((x - 1.0).sqr()));
    let cfg = ExcludeConfig {
        n: 100,
        step0: None,
        schedule: DepthSchedule::fixed(0, 0.5, RuleKind::Basic),
        direction: Direction::FromLeft,
    };
    let c = exclude(&parabola, 0.0, 2.0, &cfg, 0.01)?;
    println!("(x-1)² > 0.01 outside {:?} ({} intervals excluded)", c.survivor, c.excluded.len());
    c.replay(&parabola)?;

    // a cheap version of the square exclusion: coarse schedule, small budget
    let pi4 = ipi() / 4.0;
    let m_bar = entropy_g(&ThetaFamily::new(pi4)?, &QuadConfig::new(9, 1e-6, RuleKind::Simpson))?.hi();
    let cfg = ExcludeConfig {
        n: 30,
        schedule: DepthSchedule::fixed(7, 1e-4, RuleKind::Simpson),
        ..ExcludeConfig::square_default()
    };
    let c = exclude(&EntropyObjective, 0.0, pi4.hi(), &cfg, m_bar)?;
    println!("\nm̄ = high(g(π/4)) = {m_bar}");
    for e in &c.excluded {
        println!("  excluded {}  g ⊆ {}", e.interval, e.enclosure);
    }
    println!("survivor after {} iterations: {:?}", c.iterations_used, c.survivor);
    Ok(())
}
