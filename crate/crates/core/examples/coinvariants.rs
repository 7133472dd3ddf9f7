//! Group ring complexes: the Koszul and periodic resolutions, their
//! coinvariants, and the descent of the equivariant coarse circle.

use chainrebuild::equivariant::{
    cyclic_resolution, descend_retract, equivariant_coarse_circle, koszul_resolution, GroupSpec, Level,
};
use chainrebuild::homology::integer_homology;
use chainrebuild::rebuild::{circle_complex, Quality, RebuildKind};

fn main() -> chainrebuild::Result<()> {
    let k1 = koszul_resolution(1)?;
    let level = Level::uniform(&k1.group, 6)?;
    let c = k1.coinvariants(&level);
    let circle = circle_complex(6)?;
    println!("Z-coinvariants of Koszul(1) at 6Z equal S^[0,6]: {}", c.diff(1) == circle.diff(1));

    let k2 = koszul_resolution(2)?;
    let c2 = k2.coinvariants(&Level::uniform(&k2.group, 4)?);
    let betti: Vec<usize> = c2.degrees().map(|j| integer_homology(&c2, j).betti).collect();
    println!("torus at (4Z)^2: ranks {:?}, betti {:?}", c2.ranks(), betti);

    let p = cyclic_resolution(6, 3)?;
    let whole = Level::new(&GroupSpec::cyclic(6)?, vec![1])?;
    let cp = p.coinvariants(&whole);
    for j in 0..3 {
        let h = integer_homology(&cp, j);
        println!("Z/6, H_{j}: betti {}, torsion {:?}", h.betti, h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>());
    }

    let r = equivariant_coarse_circle(8)?;
    let trivial = Level::uniform(&r.x().group, 1)?;
    let q = Quality::integers(8, 2)?;
    let desc = descend_retract(&r, &trivial, 1, &q, RebuildKind::Weak)?;
    println!("coarse circle of length 8 descends: ranks {:?} -> {:?}", desc.certificate.retract.x.ranks(), desc.certificate.retract.xp.ranks());
    Ok(())
}
