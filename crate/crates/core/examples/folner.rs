//! Følner boxes in `Z^n` and the weak rebuildings they give.

use chainrebuild::folner::{amenable_weak_rebuilding, interior, FolnerBox};

fn main() -> chainrebuild::Result<()> {
    let b = FolnerBox::new(2, 8)?;
    for r in 1..=3 {
        println!("box 8x8, radius {r}: interior {} of {}, boundary ratio {}", interior(&b, r).interior.len(), b.size(), b.boundary_ratio(r));
    }
    for d in [4u64, 8, 16, 32] {
        let a = amenable_weak_rebuilding(1, d, None)?;
        println!("Z, d = {d}: T' = {}, κ = {}", a.t_max, a.certificate.quality.kappa.value);
    }
    for d in [8u64, 16] {
        let a = amenable_weak_rebuilding(2, d, None)?;
        println!("Z^2, d = {d}: T' = {} ({:.4}), Y+ ranks {:?}", a.t_max, a.certificate.quality.t_f64(), a.y_plus_ranks);
    }
    Ok(())
}
