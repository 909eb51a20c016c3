//! The entropy density `f(t) = t² log|t|` and its derivatives.
//!
//! A naive extension `sqr(t) * log|t|` loses the valley of `f` at
//! `t = e^{-1/2}`; the tight extension keeps it.

use nodalsym::elementary::{f_prime, f_second, ilog, x2logx};
use nodalsym::Interval;

fn main() -> nodalsym::Result<()> {
    for (lo, hi) in [(0.0, 1.0), (0.5, 0.7), (-0.3, 0.2), (1.0, 2.0), (1e-300, 1e-10)] {
        let t = Interval::new(lo, hi)?;
        let naive = match ilog(t.abs()) {
            Ok(l) => (t.sqr() * l).to_string(),
            Err(_) => "undefined (log 0)".into(),
        };
        println!("t = {t}");
        println!("  tight  f(t)   {}", x2logx(t));
        println!("  naive  f(t)   {naive}");
        println!("         f'(t)  {}", f_prime(t));
        println!("         f''(t) {}", f_second(t));
    }
    Ok(())
}
