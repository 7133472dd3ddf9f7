//! Sums, cones and composites of certified rebuildings and their `κ`.

use chainrebuild::rebuild::{circle_rebuild, compose_rebuild, cone_rebuild, sum_rebuild};
use chainrebuild::zchain::GradedMap;
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> chainrebuild::Result<()> {
    let t = BigRational::from_integer(BigInt::from(4));
    let a = circle_rebuild(16, &t, 1)?;
    let b = circle_rebuild(8, &t, 1)?;
    let s = sum_rebuild(&a, &b)?;
    println!("sum: κ = {}", s.quality.kappa.value);

    let f = GradedMap::identity(a.retract.x.clone()).scale(&BigInt::from(3));
    let c = cone_rebuild(&a, &a, &f)?;
    println!("cone of ×3: κ = {:.6} (2 + 2 + ln 3 + ln 3)", c.quality.kappa.value);

    // the 16-circle rebuilt onto an 8-circle, then that one onto a 4-circle
    let second = circle_rebuild(a.retract.xp.rank(0), &BigRational::from_integer(BigInt::from(2)), 1)?;
    let comp = compose_rebuild(&a, &second)?;
    println!("composite: T = {}, κ = {}", comp.quality.t, comp.quality.kappa.value);
    Ok(())
}
