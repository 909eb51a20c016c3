//! The full square proof with the default precision (several minutes on one core).
//!
//! `cargo run --release --example prove_square -- 7` runs every stage at
//! depth 7 instead, which finishes quickly but is usually inconclusive.

use nodalsym::prover::{prove_square, SquareConfig};

fn main() -> nodalsym::Result<()> {
    let depth = std::env::args().nth(1).map(|d| d.parse().expect("depth must be an integer"));
    let cfg = SquareConfig::default().overridden(depth, None);
    let r = prove_square(&cfg)?;
    println!("verdict        {:?}", r.verdict);
    println!("g(π/4)         {:.12}", r.g_at_pi4);
    println!("survivor       {:?}", r.exclusion.survivor);
    println!("exclusion      {} iterations, {} intervals", r.exclusion.iterations_used, r.exclusion.excluded.len());
    if let Some(c) = &r.concavity {
        println!("low(h)         {}", c.h_low);
        println!("high(1/4 + g)  {}", c.rhs_high);
    }
    if let Some(f) = &r.failed_stage {
        println!("failed stage   {f}");
    }
    if let Some(t) = r.timings {
        println!("timings        {:.1}s + {:.1}s + {:.1}s", t.g_pi4, t.exclusion, t.concavity);
    }
    Ok(())
}
