//! Homology gradient samples and the torsion bound curve, written as CSV.

use chainrebuild::equivariant::{GroupSpec, ResidualChain};
use chainrebuild::homology::Field;
use chainrebuild::pipeline::{cwr_bound_curve, gradient_experiment, write_curve, write_gradient};
use chainrebuild::rebuild::parse_rational;

fn main() -> chainrebuild::Result<()> {
    let dir = std::env::temp_dir();
    let chain = ResidualChain::powers_of_two(GroupSpec::free_abelian(1)?, 5)?;
    let report = gradient_experiment(&chain, &[1], &[Field::Rationals], None)?;
    for r in &report.rows {
        println!("Z, j = 1, index {}: betti/index = {} ({})", r.index, r.betti_per_index, r.label);
    }
    let csv = dir.join("gradient_z.csv");
    write_gradient(&report, &csv)?;

    let grid = vec![parse_rational("2").unwrap(), parse_rational("4").unwrap()];
    let rows = cwr_bound_curve(1, &[0], &grid, &[16, 32], None)?;
    for r in &rows {
        println!("d = {}, T = {}: bound {:?}, measured {}", r.d, r.t, r.bound, r.measured);
    }
    write_curve(&rows, &dir.join("cwr_z.csv"))?;
    println!("CSV written to {}", dir.display());
    Ok(())
}
