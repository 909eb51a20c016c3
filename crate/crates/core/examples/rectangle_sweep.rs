//! Where does `g_γ(θ) = (3/2) sin²θ − 2 + 5γ g(θ)` attain its minimum?
//!
//! Small γ: at θ = 0. Large γ: strictly inside (0, π/4).

use nodalsym::prover::{prove_rectangle, prove_rectangle_intervals, RectConfig};
use nodalsym::Interval;

fn main() -> nodalsym::Result<()> {
    let cfg = RectConfig::default();
    let sweep = prove_rectangle(0.5, 8, &cfg)?;
    for r in &sweep.results {
        println!("Γ = {}  {:?}  g_Γ''(0) ≥ {:.4}", r.gamma, r.verdict, r.g2_at_zero.lo());
    }

    let large = prove_rectangle_intervals(&[Interval::point(7.5), Interval::point(10.0)], &cfg)?;
    for r in &large.results {
        println!("Γ = {}  {:?}  minimizer in {:?}", r.gamma, r.verdict, r.survivor);
    }
    Ok(())
}
