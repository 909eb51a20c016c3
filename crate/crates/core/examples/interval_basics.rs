//! Outward-rounded interval arithmetic, decimal input and hex-float output.

use nodalsym::elementary::{icos, iexp, ipi, isin};
use nodalsym::Interval;

fn main() -> nodalsym::Result<()> {
    // 0.1 is not a machine number: parsing gives the tightest enclosure
    let tenth = Interval::parse_decimal("0.1")?;
    println!("0.1        {}  {}", tenth, tenth.to_hex_string());

    let sum = (0..10).fold(Interval::ZERO, |acc, _| acc + tenth);
    println!("10 x 0.1   {}  contains 1: {}", sum, sum.contains(1.0));

    let x = Interval::new(-1.0, 2.0)?;
    println!("x          {x}");
    println!("x * x      {}", x * x);
    println!("x.sqr()    {}  (dependency-free)", x.sqr());
    println!("1 / x      {}", Interval::ONE.div_extended(&x));

    let pi = ipi();
    println!("pi         {}  width {:e}", pi, pi.width());
    println!("sin(pi)    {}", isin(pi));
    println!("cos(pi/4)  {:.17}", icos(pi / 4.0));
    println!("exp(1)     {:.17}", iexp(Interval::ONE));

    match tenth.intersect(&Interval::new(0.2, 0.3)?) {
        Some(i) => println!("overlap    {i}"),
        None => println!("[0.1] and [0.2, 0.3] are disjoint"),
    }
    Ok(())
}
