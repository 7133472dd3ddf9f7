//! Builds a small complex, its cone and a cone map, and checks `dd = 0`.

use std::sync::Arc;

use chainrebuild::matrix::IntMatrix;
use chainrebuild::zchain::{cone, BasedComplex, GradedMap, HomotopySquare};

fn main() -> chainrebuild::Result<()> {
    // Z --2--> Z in degrees 1 -> 0
    let x = Arc::new(BasedComplex::from_diffs(0, &[1, 1], vec![IntMatrix::from_rows(1, 1, &[vec![2]])], "x")?);
    let id = GradedMap::identity(x.clone());
    let c = cone(&id)?;
    println!("Cone(id) ranks {:?}, valid: {}", c.complex.ranks(), c.complex.is_valid());

    let three = id.scale(&3.into());
    let sq = HomotopySquare::strict(id.clone(), id.clone(), three.clone(), three)?;
    let m = sq.cone_map()?;
    println!("cone map of (3, 3; 0) in degree 1:\n{:?}", m.at(1).to_dense());
    Ok(())
}
