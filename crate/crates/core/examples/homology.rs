//! Smith normal form, integer homology and the torsion bound.

use chainrebuild::homology::{field_betti, gabber_check, integer_homology, invariant_factors, Field};
use chainrebuild::matrix::IntMatrix;
use chainrebuild::zchain::BasedComplex;

fn main() -> chainrebuild::Result<()> {
    let a = IntMatrix::from_rows(3, 3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let f: Vec<String> = invariant_factors(&a).iter().map(|d| d.to_string()).collect();
    println!("invariant factors: {}", f.join(", "));

    // RP^2: Z --2--> Z --0--> Z
    let x = BasedComplex::from_diffs(
        0,
        &[1, 1, 1],
        vec![IntMatrix::from_rows(1, 1, &[vec![0]]), IntMatrix::from_rows(1, 1, &[vec![2]])],
        "c",
    )?;
    for j in x.degrees() {
        let h = integer_homology(&x, j);
        println!(
            "H_{j}: betti {} torsion {:?}  dim over F2 {}",
            h.betti,
            h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            field_betti(&x, j, Field::Prime(2))?
        );
    }
    let g = gabber_check(&x, 1);
    println!("log tors H_1 = {:.6} <= {:.6}: {}", g.log_torsion, g.bound, g.holds);
    Ok(())
}
