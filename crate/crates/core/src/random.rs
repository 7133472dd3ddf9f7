//! Seeded generators for random complexes, maps, squares, cubes and retracts,
//! used by the property suites and the `selftest` subcommand.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equivariant::{GroupRingElement, GroupRingMatrix, GroupSpec};
use crate::error::{Error, Result};
use crate::homology::kernel_basis;
use crate::htpy::{contract_acyclic, homotopy_inverse, HomotopyRetract};
use crate::matrix::IntMatrix;
use crate::zchain::{self, BasedComplex, ChainMap, GradedMap, HomotopyCube, HomotopySquare};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for generated complexes.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_rank: usize,
    /// Number of degrees, starting at 0.
    pub max_degrees: usize,
    pub bound: i64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_rank: 6, max_degrees: 4, bound: 3 }
    }
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(rows, cols, &data)
}

/// A random complex in degrees `0..k` with entries in `[-bound, bound]`.
/// Each differential is built from integer kernel vectors of the previous
/// one, so `dd = 0` holds by construction.
pub fn random_complex(rng: &mut impl Rng, lim: &Limits) -> BasedComplex {
    let k = rng.gen_range(1..=lim.max_degrees);
    let ranks: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=lim.max_rank)).collect();
    let mut diffs: Vec<IntMatrix> = Vec::new();
    for j in 1..k {
        let (rows, cols) = (ranks[j - 1], ranks[j]);
        let d = if j == 1 {
            random_matrix(rng, rows, cols, lim.bound)
        } else {
            let ker = kernel_basis(&diffs[j - 2]);
            let mut columns = Vec::with_capacity(cols);
            for _ in 0..cols {
                let mut col = vec![BigInt::from(0); rows];
                for _attempt in 0..8 {
                    let c: Vec<BigInt> = (0..ker.cols()).map(|_| BigInt::from(rng.gen_range(-1..=1))).collect();
                    let v = ker.mul_vec(&c);
                    if v.iter().all(|x| *x >= BigInt::from(-lim.bound) && *x <= BigInt::from(lim.bound)) {
                        col = v;
                        break;
                    }
                }
                columns.push(zchain::dense_to_column(&col));
            }
            IntMatrix::from_columns(rows, columns)
        };
        diffs.push(d);
    }
    BasedComplex::from_diffs(0, &ranks, diffs, "b").expect("generated complex satisfies dd = 0")
}

/// Random graded map of the given degree with entries in `[-bound, bound]`.
pub fn random_graded(rng: &mut impl Rng, x: &Arc<BasedComplex>, y: &Arc<BasedComplex>, degree: i32, bound: i64) -> GradedMap {
    GradedMap::from_fn(x.clone(), y.clone(), degree, |j| random_matrix(rng, y.rank(j + degree), x.rank(j), bound))
        .expect("shapes match")
}

/// `[d, K] = dK + Kd` for a degree-one map `K`.
pub fn commutator(k: &GradedMap) -> GradedMap {
    k.boundary()
}

/// A chain map `X -> Y`: a null-homotopic part `[d, K]`, plus a multiple of
/// the identity when `X = Y`.
pub fn random_chain_map(rng: &mut impl Rng, x: &Arc<BasedComplex>, y: &Arc<BasedComplex>) -> ChainMap {
    let k = random_graded(rng, x, y, 1, 1);
    let mut f = commutator(&k);
    if x == y {
        let c = BigInt::from(rng.gen_range(-2..=2));
        f = f.add(&GradedMap::identity(x.clone()).scale(&c)).expect("same complexes");
    }
    f
}

/// A homotopy commutative square `f: X -> Y`, `g: X -> Y`, `a = id + [d, A]`,
/// `b = id + [d, B]`, `g = f + [d, K]` with `H = fA + Ka - Bf`.
pub fn random_square(rng: &mut impl Rng, lim: &Limits) -> Result<HomotopySquare> {
    let x = Arc::new(random_complex(rng, lim));
    let y = Arc::new(random_complex(rng, lim));
    let f = random_chain_map(rng, &x, &y);
    let a_h = random_graded(rng, &x, &x, 1, 1);
    let b_h = random_graded(rng, &y, &y, 1, 1);
    let k = random_graded(rng, &x, &y, 1, 1);
    let a = GradedMap::identity(x.clone()).add(&commutator(&a_h))?;
    let b = GradedMap::identity(y.clone()).add(&commutator(&b_h))?;
    let g = f.add(&commutator(&k))?;
    let h = f.compose(&a_h)?.add(&k.compose(&a)?)?.sub(&b_h.compose(&f)?)?;
    HomotopySquare::new(f, g, a, b, h)
}

/// `(X, X, id + [d, A], id, -A)`.
pub fn twisted_identity_retract(rng: &mut impl Rng, x: &Arc<BasedComplex>) -> Result<HomotopyRetract> {
    let a = random_graded(rng, x, x, 1, 1);
    let xi = GradedMap::identity(x.clone()).add(&commutator(&a))?;
    HomotopyRetract::new(xi, GradedMap::identity(x.clone()), a.neg())
}

/// `X ⊕ Cone(id_C) -> X` collapsing a contractible summand.
pub fn collapse_retract(x: &Arc<BasedComplex>, c: &Arc<BasedComplex>) -> Result<HomotopyRetract> {
    let cone = Arc::new(zchain::cone_complex(&GradedMap::identity(c.clone())));
    let s = contract_acyclic(&cone)?;
    let big = Arc::new(x.direct_sum(&cone));
    let proj = GradedMap::from_fn(big.clone(), x.clone(), 0, |j| {
        IntMatrix::identity(x.rank(j)).hstack(&IntMatrix::zeros(x.rank(j), cone.rank(j)))
    })?;
    let incl = GradedMap::from_fn(x.clone(), big.clone(), 0, |j| {
        IntMatrix::identity(x.rank(j)).vstack(&IntMatrix::zeros(cone.rank(j), x.rank(j)))
    })?;
    let h = GradedMap::from_fn(big.clone(), big.clone(), 1, |j| {
        IntMatrix::zeros(x.rank(j + 1), x.rank(j)).block_diag(&s.s.at(j))
    })?;
    HomotopyRetract::new(proj, incl, h)
}

/// A random retract onto a random complex: a contractible summand is
/// collapsed, then a twisted identity is applied.
pub fn random_retract(rng: &mut impl Rng, lim: &Limits) -> Result<HomotopyRetract> {
    let xp = Arc::new(random_complex(rng, lim));
    let small = Limits { max_rank: 2, max_degrees: lim.max_degrees.min(3), bound: lim.bound };
    let c = Arc::new(random_complex(rng, &small));
    let first = collapse_retract(&xp, &c)?;
    let second = twisted_identity_retract(rng, &xp)?;
    first.then(&second)
}

/// The cube whose filled square is the cone retract of `f` along retracts of
/// its source and target: back face `(f, f, id, id; 0)`, front face
/// `(υfξ', f, ξ', υ'; Υfξ')`, sides `A = Ξ`, `B = Υ`, `F = -υfΞ`, `G = 0`
/// and filler `Φ = -ΥfΞ`.
pub fn cone_retract_cube(rx: &HomotopyRetract, ry: &HomotopyRetract, f: &ChainMap) -> Result<HomotopyCube> {
    let (x, y) = (rx.x.clone(), ry.x.clone());
    let idx = GradedMap::identity(x.clone());
    let idy = GradedMap::identity(y.clone());
    let back = HomotopySquare::strict(f.clone(), f.clone(), idx.clone(), idy.clone())?;
    let fp = ry.xi.compose(f)?.compose(&rx.xip)?;
    let hp = ry.big_xi.compose(f)?.compose(&rx.xip)?;
    let front = HomotopySquare::new(fp, f.clone(), rx.xip.clone(), ry.xip.clone(), hp)?;
    let f_face = ry.xi.compose(f)?.compose(&rx.big_xi)?.neg();
    let phi = ry.big_xi.compose(f)?.compose(&rx.big_xi)?.neg();
    let cube = HomotopyCube {
        back,
        front,
        xi: rx.xi.clone(),
        upsilon: ry.xi.clone(),
        zeta: idx,
        omega: idy,
        a_face: rx.big_xi.clone(),
        b_face: ry.big_xi.clone(),
        f_face,
        g_face: GradedMap::zero(x.clone(), y, 1),
        phi,
    };
    cube.verify()?;
    Ok(cube)
}

/// A random group ring matrix over `Z^n` with entries supported in
/// `[-spread, spread]^n`.
pub fn random_group_ring_matrix(rng: &mut impl Rng, group: &GroupSpec, rows: usize, cols: usize, spread: i64) -> GroupRingMatrix {
    let mut entries = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let mut e = GroupRingElement::zero();
            for _ in 0..rng.gen_range(0..=3) {
                let mut g: Vec<i64> = (0..group.dim()).map(|_| rng.gen_range(-spread..=spread)).collect();
                group.reduce(&mut g);
                e.add_term(g, BigInt::from(rng.gen_range(-3..=3)));
            }
            entries.push((r, c, e));
        }
    }
    GroupRingMatrix::from_entries(rows, cols, entries)
}

/// Identities checked per case by [`identity_case`].
pub const IDENTITY_CHECKS: [&str; 6] = ["cone", "cone_map", "cube_filler", "retract", "contraction", "homotopy_inverse"];

/// One randomized case: builds a cone, a square and its cone map, a cube and
/// its filled square, a retract, a contraction of `Cone(id)` and a homotopy
/// inverse, each verified by exact integer equality.
pub fn identity_case(rng: &mut impl Rng, lim: &Limits) -> std::result::Result<(), (&'static str, Error)> {
    let x = Arc::new(random_complex(rng, lim));
    let y = Arc::new(random_complex(rng, lim));
    let f = random_chain_map(rng, &x, &y);
    let c = zchain::cone(&f).map_err(|e| ("cone", e))?;
    if let Some(msg) = c.complex.validate().into_iter().next() {
        return Err(("cone", Error::InvalidComplex(msg)));
    }
    let sq = random_square(rng, lim).map_err(|e| ("cone_map", e))?;
    sq.cone_map().map_err(|e| ("cone_map", e))?;
    let rx = random_retract(rng, lim).map_err(|e| ("retract", e))?;
    let ry = random_retract(rng, lim).map_err(|e| ("retract", e))?;
    rx.verify().map_err(|e| ("retract", e))?;
    let g = random_chain_map(rng, &rx.x, &ry.x);
    let cube = cone_retract_cube(&rx, &ry, &g).map_err(|e| ("cube_filler", e))?;
    zchain::cube_fill_square(&cube).map_err(|e| ("cube_filler", e))?;
    let cid = Arc::new(zchain::cone_complex(&GradedMap::identity(x.clone())));
    contract_acyclic(&cid).and_then(|s| s.verify()).map_err(|e| ("contraction", e))?;
    let small = Limits { max_rank: 2, max_degrees: lim.max_degrees.min(3), bound: lim.bound };
    let extra = Arc::new(random_complex(rng, &small));
    let collapse = collapse_retract(&x, &extra).map_err(|e| ("homotopy_inverse", e))?;
    homotopy_inverse(&collapse.xi).map_err(|e| ("homotopy_inverse", e))?;
    Ok(())
}

/// Outcome of [`identity_suite`].
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub cases: usize,
    pub failures: Vec<(usize, &'static str, String)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `cases` seeded identity cases.
pub fn identity_suite(seed: u64, cases: usize, lim: &Limits) -> SuiteReport {
    let mut r = rng(seed);
    let mut report = SuiteReport { cases, failures: Vec::new() };
    for k in 0..cases {
        if let Err((what, e)) = identity_case(&mut r, lim) {
            report.failures.push((k, what, e.to_string()));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zchain::cube_fill_square;

    #[test]
    fn generated_objects_satisfy_their_identities() {
        let mut r = rng(7);
        let lim = Limits::default();
        for _ in 0..20 {
            let x = random_complex(&mut r, &lim);
            assert!(x.is_valid());
            assert!(x.degrees().all(|j| x.diff(j).entries().all(|(_, _, v)| v.magnitude() <= &3u32.into())));
            random_square(&mut r, &lim).unwrap();
            let rx = random_retract(&mut r, &lim).unwrap();
            let ry = random_retract(&mut r, &lim).unwrap();
            let f = random_chain_map(&mut r, &rx.x, &ry.x);
            let cube = cone_retract_cube(&rx, &ry, &f).unwrap();
            cube_fill_square(&cube).unwrap();
        }
    }

    #[test]
    fn small_identity_suite() {
        let rep = identity_suite(11, 25, &Limits::default());
        assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_complex(&mut rng(3), &Limits::default());
        let b = random_complex(&mut rng(3), &Limits::default());
        assert_eq!(a, b);
    }
}
