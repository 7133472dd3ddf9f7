//! Certified rebuildings of the circle `S^[0,d]` at quality `(T, 2)`.

use chainrebuild::pipeline::describe_quality;
use chainrebuild::rebuild::{circle_chunks, circle_rebuild, parse_rational};

fn main() -> chainrebuild::Result<()> {
    for (d, t) in [(16, "4"), (10, "3"), (7, "7/2")] {
        let t = parse_rational(t).map_err(chainrebuild::Error::InvalidArgument)?;
        let chunks = circle_chunks(d, &t)?;
        let cert = circle_rebuild(d, &t, 1)?;
        println!(
            "d = {d}: chunks {chunks:?}, ranks {:?} -> {:?}, {}",
            cert.retract.x.ranks(),
            cert.retract.xp.ranks(),
            describe_quality(&cert.quality)
        );
    }
    Ok(())
}
