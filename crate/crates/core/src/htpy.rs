//! Homotopy retracts, contractions of acyclic complexes, homotopy inverses of
//! weak equivalences, augmentations and the quotient retracts built from an
//! augmentedly nullhomotopic based subcomplex.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::homology::{self, integer_homology, Solver};
use crate::int::log_plus;
use crate::matrix::IntMatrix;
use crate::zchain::{self, column_dense, dense_to_column, BasedComplex, ChainHomotopy, ChainMap, GradedMap};

/// `(X, X', ξ, ξ', Ξ)` with chain maps `ξ: X -> X'`, `ξ': X' -> X` and a
/// homotopy `Ξ: id_X ≃ ξ'∘ξ`.
#[derive(Clone, Debug)]
pub struct HomotopyRetract {
    pub x: Arc<BasedComplex>,
    pub xp: Arc<BasedComplex>,
    pub xi: ChainMap,
    pub xip: ChainMap,
    pub big_xi: ChainHomotopy,
}

impl HomotopyRetract {
    /// Builds the retract only if every identity holds exactly.
    pub fn new(xi: ChainMap, xip: ChainMap, big_xi: ChainHomotopy) -> Result<Self> {
        let r = HomotopyRetract {
            x: xi.source().clone(),
            xp: xi.target().clone(),
            xi,
            xip,
            big_xi,
        };
        r.verify()?;
        Ok(r)
    }

    /// The identity retract `(X, X, id, id, 0)`.
    pub fn identity(x: Arc<BasedComplex>) -> Self {
        let id = GradedMap::identity(x.clone());
        HomotopyRetract {
            x: x.clone(),
            xp: x.clone(),
            xi: id.clone(),
            xip: id,
            big_xi: GradedMap::zero(x.clone(), x, 1),
        }
    }

    pub fn verify(&self) -> Result<()> {
        if self.xi.target() != self.xip.source() && !Arc::ptr_eq(self.xi.target(), self.xip.source()) {
            return Err(Error::Shape("ξ' does not start where ξ ends".into()));
        }
        self.xi.check_chain_map()?;
        self.xip.check_chain_map()?;
        self.big_xi.check_homotopy_from_identity(&self.xip, &self.xi, "Ξ: id ≃ ξ'∘ξ")
    }

    /// `X -> X' -> X''`: `(υξ, ξ'υ', Ξ + ξ'Υξ)` for `next = (X', X'', υ, υ', Υ)`.
    pub fn then(&self, next: &HomotopyRetract) -> Result<HomotopyRetract> {
        let next = next.retarget(self.xp.clone(), next.xp.clone())?;
        let xi = next.xi.compose(&self.xi)?;
        let xip = self.xip.compose(&next.xip)?;
        let big = self.big_xi.add(&self.xip.compose(&next.big_xi)?.compose(&self.xi)?)?;
        HomotopyRetract::new(xi, xip, big)
    }

    /// The same matrices over complexes with the same ranks and differentials
    /// but possibly different labels.
    pub fn retarget(&self, x: Arc<BasedComplex>, xp: Arc<BasedComplex>) -> Result<HomotopyRetract> {
        for (a, b) in [(&self.x, &x), (&self.xp, &xp)] {
            if a.lo() != b.lo() || a.ranks() != b.ranks() || a.degrees().any(|j| a.diff(j) != b.diff(j)) {
                return Err(Error::Shape("retarget between complexes with different differentials".into()));
            }
        }
        HomotopyRetract::new(
            self.xi.retarget(x.clone(), xp.clone())?,
            self.xip.retarget(xp, x.clone())?,
            self.big_xi.retarget(x.clone(), x)?,
        )
    }
}

/// A contraction `s` of a complex: `ds + sd = id`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub s: GradedMap,
}

impl Contraction {
    pub fn complex(&self) -> &Arc<BasedComplex> {
        self.s.source()
    }

    pub fn verify(&self) -> Result<()> {
        let x = self.s.source().clone();
        let id = GradedMap::identity(x.clone());
        let zero = GradedMap::zero(x.clone(), x, 0);
        self.s.check_homotopy(&id, &zero, "ds + sd = id")
    }
}

/// Contraction of a bounded acyclic complex, built from the bottom degree up by
/// solving `d_{j+1} s_j = id - s_{j-1} d_j` column by column.
pub fn contract_acyclic(x: &Arc<BasedComplex>) -> Result<Contraction> {
    let mut maps: Vec<IntMatrix> = Vec::new();
    let mut prev = IntMatrix::zeros(x.rank(x.lo()), 0); // s_{lo-1}
    for j in x.degrees() {
        let rhs = IntMatrix::identity(x.rank(j)).sub(&prev.mul(&x.diff(j)));
        let d = x.diff(j + 1);
        let solver = Solver::new(&d);
        let mut cols = Vec::with_capacity(rhs.cols());
        for c in 0..rhs.cols() {
            let b = column_dense(&rhs, c);
            let sol = solver.solve(&b).ok_or(Error::NotAcyclic { degree: j })?;
            cols.push(dense_to_column(&sol));
        }
        let s = IntMatrix::from_columns(x.rank(j + 1), cols);
        maps.push(s.clone());
        prev = s;
    }
    let c = Contraction { s: GradedMap::new(x.clone(), x.clone(), 1, maps)? };
    c.verify()?;
    Ok(c)
}

/// Checks that a chain map induces isomorphisms on integer homology, by
/// checking that its mapping cone is acyclic.
pub fn check_weak_equivalence(q: &ChainMap) -> Result<()> {
    let c = zchain::cone(q)?;
    for j in c.complex.degrees() {
        if !integer_homology(&c.complex, j).is_trivial() {
            // H_j(Cone q) ≠ 0 detects a failure in degree j or j - 1
            return Err(Error::NotWeakEquivalence { degree: j });
        }
    }
    Ok(())
}

/// A homotopy inverse `r` of a weak equivalence `q: X -> Y` with
/// `h_src: id_X ≃ r∘q` and `h_tgt: id_Y ≃ q∘r`.
#[derive(Clone, Debug)]
pub struct HomotopyInverse {
    pub r: ChainMap,
    pub h_src: ChainHomotopy,
    pub h_tgt: ChainHomotopy,
}

/// Homotopy inverse read off a contraction `s` of `Cone(q)`.
///
/// Writing `s(0, y) = (r y, K y)` and `s(x, 0) = (L x, M x)`, the identity
/// `ds + sd = id` says exactly that `r` is a chain map, `K: id ≃ q r` and
/// `-L: id ≃ r q`.
pub fn homotopy_inverse(q: &ChainMap) -> Result<HomotopyInverse> {
    q.check_chain_map()?;
    let x = q.source().clone();
    let y = q.target().clone();
    let cone = zchain::cone(q)?;
    let s = match contract_acyclic(&cone.complex) {
        Ok(s) => s,
        Err(Error::NotAcyclic { degree }) => return Err(Error::NotWeakEquivalence { degree }),
        Err(e) => return Err(e),
    };
    // s_j : X_{j-1} ⊕ Y_j -> X_j ⊕ Y_{j+1}
    let block = |j: i32, top: bool, left: bool| -> IntMatrix {
        let m = s.s.at(j);
        let (xr, yr) = (x.rank(j), y.rank(j + 1));
        let (xc, yc) = (x.rank(j - 1), y.rank(j));
        let rows: Vec<usize> = if top { (0..xr).collect() } else { (xr..xr + yr).collect() };
        let cols: Vec<usize> = if left { (0..xc).collect() } else { (xc..xc + yc).collect() };
        m.select_rows(&rows).select_columns(&cols)
    };
    let r = GradedMap::from_fn(y.clone(), x.clone(), 0, |j| block(j, true, false))?;
    let h_tgt = GradedMap::from_fn(y.clone(), y.clone(), 1, |j| block(j, false, false))?;
    let h_src = GradedMap::from_fn(x.clone(), x.clone(), 1, |i| block(i + 1, true, true).neg())?;
    r.check_chain_map()?;
    let id_x = GradedMap::identity(x.clone());
    let id_y = GradedMap::identity(y.clone());
    h_src.check_homotopy(&id_x, &r.compose(q)?, "id ≃ r∘q")?;
    h_tgt.check_homotopy(&id_y, &q.compose(&r)?, "id ≃ q∘r")?;
    Ok(HomotopyInverse { r, h_src, h_tgt })
}

/// `X^ε`: a complex concentrated in degrees `>= 0` with a copy of `Z` in
/// degree `-1` and `d_0 = ε` sending every basis element to 1.
#[derive(Clone, Debug)]
pub struct AugmentedComplex {
    pub base: Arc<BasedComplex>,
    pub augmented: Arc<BasedComplex>,
}

pub const AUGMENTATION_LABEL: &str = "aug";

/// The augmentation row `ε: Z^rank -> Z`.
pub fn augmentation_row(rank: usize) -> IntMatrix {
    IntMatrix::from_triplets(1, rank, (0..rank).map(|i| (0, i, BigInt::one())))
}

pub fn augment(x: &BasedComplex) -> Result<AugmentedComplex> {
    if !x.is_zero() && x.lo() < 0 {
        return Err(Error::InvalidArgument("augmentation needs a complex in degrees >= 0".into()));
    }
    let base = x.widen(0, x.hi().max(0));
    let eps = augmentation_row(base.rank(0));
    if !eps.mul(&base.diff(1)).is_zero() {
        return Err(Error::InvalidComplex("ε∘d_1 ≠ 0: complex is not augmented".into()));
    }
    let mut labels = vec![vec![AUGMENTATION_LABEL.to_string()]];
    let mut diffs = vec![IntMatrix::zeros(0, 1), eps];
    for j in base.degrees() {
        labels.push(base.labels(j).to_vec());
        if j > 0 {
            diffs.push(base.diff(j).into_owned());
        }
    }
    let augmented = BasedComplex::new(-1, labels, diffs)?;
    Ok(AugmentedComplex { base: Arc::new(base), augmented: Arc::new(augmented) })
}

/// `Y^+`: `Y` with an extra free summand `Z` in degree 0 on which `d_1` is zero.
pub fn plus_construction(y: &BasedComplex) -> BasedComplex {
    let base = if y.is_zero() { BasedComplex::point(0) } else { y.widen(0, y.hi().max(0)) };
    if y.is_zero() {
        return base.relabel(|_, _| "plus".into());
    }
    let mut labels = Vec::new();
    let mut diffs = Vec::new();
    for j in base.degrees() {
        let mut l = base.labels(j).to_vec();
        if j == 0 {
            l.push("plus".into());
            diffs.push(IntMatrix::zeros(0, l.len()));
        } else if j == 1 {
            let d = base.diff(1);
            diffs.push(d.vstack(&IntMatrix::zeros(1, d.cols())));
        } else {
            diffs.push(base.diff(j).into_owned());
        }
        labels.push(l);
    }
    BasedComplex::new_unchecked(0, labels, diffs)
}

/// A based subcomplex: per degree, a set of basis indices closed under `d`.
#[derive(Clone, Debug)]
pub struct BasedSubcomplex {
    pub ambient: Arc<BasedComplex>,
    /// Sorted basis indices per ambient degree (`lo..=hi`).
    pub indices: Vec<Vec<usize>>,
}

impl BasedSubcomplex {
    pub fn new(ambient: Arc<BasedComplex>, mut indices: Vec<Vec<usize>>) -> Result<Self> {
        let len = (ambient.hi() - ambient.lo() + 1).max(0) as usize;
        if indices.len() != len {
            return Err(Error::Shape(format!("need index sets for {len} degrees")));
        }
        for (k, idx) in indices.iter_mut().enumerate() {
            idx.sort_unstable();
            idx.dedup();
            let j = ambient.lo() + k as i32;
            if idx.last().is_some_and(|&i| i >= ambient.rank(j)) {
                return Err(Error::Shape(format!("index out of range in degree {j}")));
            }
        }
        let sub = BasedSubcomplex { ambient, indices };
        for j in sub.ambient.degrees() {
            let member = sub.membership(j - 1);
            let d = sub.ambient.diff(j);
            for &c in sub.idx(j) {
                if d.column(c).iter().any(|(r, _)| !member[*r]) {
                    return Err(Error::InvalidComplex(format!(
                        "not a subcomplex: d_{j} of `{}` leaves it",
                        sub.ambient.labels(j)[c]
                    )));
                }
            }
        }
        Ok(sub)
    }

    pub fn idx(&self, j: i32) -> &[usize] {
        let k = j - self.ambient.lo();
        if k < 0 || k as usize >= self.indices.len() {
            &[]
        } else {
            &self.indices[k as usize]
        }
    }

    fn membership(&self, j: i32) -> Vec<bool> {
        let mut m = vec![false; self.ambient.rank(j)];
        for &i in self.idx(j) {
            m[i] = true;
        }
        m
    }

    /// Complementary indices in degree `j`.
    pub fn complement(&self, j: i32) -> Vec<usize> {
        let m = self.membership(j);
        (0..m.len()).filter(|&i| !m[i]).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.indices.iter().map(Vec::len).collect()
    }

    /// `A` as a based complex, with the restricted differentials.
    pub fn complex(&self) -> BasedComplex {
        self.restricted(|j| self.idx(j).to_vec())
    }

    /// `X/A` with the basis induced by the complement.
    pub fn quotient(&self) -> BasedComplex {
        self.restricted(|j| self.complement(j))
    }

    fn restricted(&self, pick: impl Fn(i32) -> Vec<usize>) -> BasedComplex {
        let x = &self.ambient;
        let mut labels = Vec::new();
        let mut diffs = Vec::new();
        for j in x.degrees() {
            let cols = pick(j);
            labels.push(cols.iter().map(|&i| x.labels(j)[i].clone()).collect());
            if j == x.lo() {
                diffs.push(IntMatrix::zeros(0, cols.len()));
            } else {
                diffs.push(x.diff(j).select_columns(&cols).select_rows(&pick(j - 1)));
            }
        }
        BasedComplex::new_unchecked(x.lo(), labels, diffs)
    }

    /// Matrix of the coordinate inclusion `Z^{picked} -> X_j`.
    fn coordinate_inclusion(&self, j: i32, picked: &[usize]) -> IntMatrix {
        IntMatrix::from_triplets(
            self.ambient.rank(j),
            picked.len(),
            picked.iter().enumerate().map(|(c, &r)| (r, c, BigInt::one())),
        )
    }
}

/// Output of [`augmented_retract`]: `g^+: X -> Y^+`, `h^+: Y^+ -> X` and
/// `Hom: id_X ≃ h^+∘g^+`.
#[derive(Clone, Debug)]
pub struct AugmentedRetract {
    pub retract: HomotopyRetract,
    pub quotient: Arc<BasedComplex>,
    pub y_plus: Arc<BasedComplex>,
}

/// Nullhomotopy data for `f^ε: A^ε -> X^ε`: `maps[k]` is `N_{k-1}: A^ε_{k-1} -> X^ε_k`.
#[derive(Clone, Debug)]
pub struct AugmentedNullhomotopy {
    pub maps: Vec<IntMatrix>,
}

impl AugmentedNullhomotopy {
    pub fn at(&self, j: i32, rows: usize, cols: usize) -> IntMatrix {
        let k = j + 1;
        if k < 0 || k as usize >= self.maps.len() {
            IntMatrix::zeros(rows, cols)
        } else {
            self.maps[k as usize].clone()
        }
    }
}

/// Augmentation-aware rank of `X^ε_j` (`1` in degree `-1`).
fn aug_rank(x: &BasedComplex, j: i32) -> usize {
    if j == -1 {
        1
    } else {
        x.rank(j)
    }
}

/// Checks `dN + Nd = f^ε` on the augmented complexes.
pub fn check_augmented_nullhomotopy(sub: &BasedSubcomplex, n: &AugmentedNullhomotopy) -> Result<()> {
    let x = &sub.ambient;
    let a = sub.complex();
    let top = x.hi();
    let d_x = |j: i32| -> IntMatrix {
        if j == 0 {
            augmentation_row(x.rank(0))
        } else if j == -1 {
            IntMatrix::zeros(0, 1)
        } else {
            x.diff(j).into_owned()
        }
    };
    let d_a = |j: i32| -> IntMatrix {
        if j == 0 {
            augmentation_row(a.rank(0))
        } else if j == -1 {
            IntMatrix::zeros(0, 1)
        } else {
            a.diff(j).into_owned()
        }
    };
    for j in -1..=top {
        let nj = n.at(j, aug_rank(x, j + 1), aug_rank(&a, j));
        let nprev = n.at(j - 1, aug_rank(x, j), aug_rank(&a, j - 1));
        if nj.shape() != (aug_rank(x, j + 1), aug_rank(&a, j)) {
            return Err(Error::Shape(format!("nullhomotopy component in degree {j} has the wrong shape")));
        }
        let lhs = d_x(j + 1).mul(&nj).add(&nprev.mul(&d_a(j)));
        let f = if j == -1 { IntMatrix::identity(1) } else { sub.coordinate_inclusion(j, sub.idx(j)) };
        if lhs != f {
            return Err(Error::HomotopyIdentity { degree: j, what: "dN + Nd = f^ε".into() });
        }
    }
    Ok(())
}

/// Nullhomotopy of `f^ε` from a contraction of `X^ε`: `N = s∘f^ε`.
pub fn nullhomotopy_from_contraction(sub: &BasedSubcomplex) -> Result<AugmentedNullhomotopy> {
    let aug = augment(&sub.ambient)?;
    let s = contract_acyclic(&aug.augmented)?;
    let x = &sub.ambient;
    let mut maps = Vec::new();
    for j in -1..=x.hi() {
        let f = if j == -1 { IntMatrix::identity(1) } else { sub.coordinate_inclusion(j, sub.idx(j)) };
        maps.push(s.s.at(j).mul(&f));
    }
    Ok(AugmentedNullhomotopy { maps })
}

/// Quotient retract for a based subcomplex `A ⊂ X` whose augmented inclusion
/// is nullhomotopic: with `g` the projection to `Y = X/A`, `σ` the coordinate
/// section, `p_A` the projection to `A` and `c = p_A d σ` (and `c = ε` in
/// degree 0), put `h = σ - N c`, `H = N p_A`, `g^+_0 = (g_0, ε)` and
/// `h^+_0 = (h_0, N_{-1}(1))`. Then `H: id ≃ h^+ g^+`.
///
/// If `null` is `None`, the nullhomotopy comes from contracting `X^ε`.
pub fn augmented_retract(sub: &BasedSubcomplex, null: Option<&AugmentedNullhomotopy>) -> Result<AugmentedRetract> {
    let x = &sub.ambient;
    if !x.is_zero() && x.lo() < 0 {
        return Err(Error::InvalidArgument("augmented retract needs a complex in degrees >= 0".into()));
    }
    if x.lo() != 0 && !x.is_zero() {
        let wide = Arc::new(x.widen(0, x.hi()));
        let mut indices = vec![Vec::new(); (x.lo()) as usize];
        indices.extend(sub.indices.iter().cloned());
        let sub = BasedSubcomplex::new(wide, indices)?;
        return augmented_retract(&sub, null);
    }
    let owned;
    let n = match null {
        Some(n) => n,
        None => {
            owned = nullhomotopy_from_contraction(sub)?;
            &owned
        }
    };
    check_augmented_nullhomotopy(sub, n)?;
    let y = Arc::new(sub.quotient());
    let y_plus = Arc::new(plus_construction(&y));
    let top = x.hi();
    let a_rank = |j: i32| sub.idx(j).len();
    // projections and sections as matrices
    let g = |j: i32| sub.coordinate_inclusion(j, &sub.complement(j)).transpose();
    let sigma = |j: i32| sub.coordinate_inclusion(j, &sub.complement(j));
    let p_a = |j: i32| sub.coordinate_inclusion(j, sub.idx(j)).transpose();
    let c = |j: i32| -> IntMatrix {
        if j == 0 {
            augmentation_row(y.rank(0))
        } else {
            p_a(j - 1).mul(&x.diff(j)).mul(&sigma(j))
        }
    };
    let nmat = |j: i32| n.at(j, aug_rank(x, j + 1), if j == -1 { 1 } else { a_rank(j) });
    let h = |j: i32| sigma(j).sub(&nmat(j - 1).mul(&c(j)));
    let g_plus = GradedMap::from_fn(x.clone(), y_plus.clone(), 0, |j| {
        if j == 0 {
            g(0).vstack(&augmentation_row(x.rank(0)))
        } else {
            g(j)
        }
    })?;
    let h_plus = GradedMap::from_fn(y_plus.clone(), x.clone(), 0, |j| {
        if j == 0 {
            h(0).hstack(&nmat(-1))
        } else {
            h(j)
        }
    })?;
    let hom = GradedMap::from_fn(x.clone(), x.clone(), 1, |j| {
        if j < top {
            nmat(j).mul(&p_a(j))
        } else {
            IntMatrix::zeros(x.rank(j + 1), x.rank(j))
        }
    })?;
    let retract = HomotopyRetract::new(g_plus, h_plus, hom)?;
    Ok(AugmentedRetract { retract, quotient: y, y_plus })
}

/// Rank compression `T' = min_{j <= n} rk X_j / rk Y^+_j` (degrees with
/// `rk Y^+_j = 0` impose nothing; an empty minimum is capped at `rk X_0`),
/// and `κ = max{1, max_{j <= n} log_+ ||d^X_j||}`.
pub fn quality_from_quotient(x: &BasedComplex, y_plus: &BasedComplex, n: i32) -> (BigRational, f64) {
    let mut t: Option<BigRational> = None;
    for j in x.lo().min(0)..=n {
        let ry = y_plus.rank(j);
        if ry == 0 {
            continue;
        }
        let q = BigRational::new(BigInt::from(x.rank(j)), BigInt::from(ry));
        t = Some(match t {
            Some(t0) if t0 <= q => t0,
            _ => q,
        });
    }
    let t = t.unwrap_or_else(|| BigRational::from_integer(BigInt::from(x.rank(0).max(1))));
    let mut kappa: f64 = 1.0;
    for j in x.lo().min(0)..=n {
        kappa = kappa.max(log_plus(&x.diff_norm(j)));
    }
    (t, kappa)
}

/// Transports a retract of `X` along an isomorphism `φ: X0 -> X` with inverse
/// `φ⁻¹`, giving a retract of `X0` onto the same `X'`.
pub fn precompose_iso(r: &HomotopyRetract, phi: &ChainMap, phi_inv: &ChainMap) -> Result<HomotopyRetract> {
    let xi = r.xi.compose(phi)?;
    let xip = phi_inv.compose(&r.xip)?;
    let big = phi_inv.compose(&r.big_xi)?.compose(phi)?;
    HomotopyRetract::new(xi, xip, big)
}

/// Transports a retract along an isomorphism of the small end `ψ: X' -> X''`.
pub fn postcompose_iso(r: &HomotopyRetract, psi: &ChainMap, psi_inv: &ChainMap) -> Result<HomotopyRetract> {
    let xi = psi.compose(&r.xi)?;
    let xip = r.xip.compose(psi_inv)?;
    HomotopyRetract::new(xi, xip, r.big_xi.clone())
}

/// A permutation isomorphism between complexes with the same ranks whose
/// differentials correspond under the given basis bijections.
pub fn permutation_iso(
    source: Arc<BasedComplex>,
    target: Arc<BasedComplex>,
    perms: &[Vec<usize>],
) -> Result<(ChainMap, ChainMap)> {
    let k0 = source.lo();
    let fwd = GradedMap::from_fn(source.clone(), target.clone(), 0, |j| {
        IntMatrix::permutation(&perms[(j - k0) as usize])
    })?;
    let bwd = GradedMap::from_fn(target, source, 0, |j| IntMatrix::permutation(&perms[(j - k0) as usize]).transpose())?;
    fwd.check_chain_map()?;
    bwd.check_chain_map()?;
    Ok((fwd, bwd))
}

/// `true` if the homology of `X` vanishes in every degree.
pub fn is_acyclic(x: &BasedComplex) -> bool {
    x.degrees().all(|j| integer_homology(x, j).is_trivial())
}

#[allow(dead_code)]
fn rank_of(m: &IntMatrix) -> usize {
    homology::rank(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let data: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        let c = data.first().map(|r| r.len()).unwrap_or(0);
        IntMatrix::from_rows(data.len(), c, &data)
    }

    fn circle(d: usize) -> Arc<BasedComplex> {
        Arc::new(crate::rebuild::circle_complex(d).unwrap())
    }

    #[test]
    fn identity_retract_is_valid() {
        let r = HomotopyRetract::identity(circle(4));
        assert!(r.verify().is_ok());
    }

    #[test]
    fn perturbed_homotopy_is_rejected() {
        let x = circle(3);
        let id = GradedMap::identity(x.clone());
        let mut maps: Vec<IntMatrix> = GradedMap::zero(x.clone(), x.clone(), 1).components().to_vec();
        maps[0] = IntMatrix::from_triplets(3, 3, vec![(0, 0, BigInt::from(1))]);
        let bad = GradedMap::new(x.clone(), x, 1, maps).unwrap();
        assert!(HomotopyRetract::new(id.clone(), id, bad).is_err());
    }

    #[test]
    fn contraction_of_unit_interval() {
        let x = Arc::new(BasedComplex::from_diffs(0, &[1, 1], vec![m(&[&[1]])], "e").unwrap());
        let s = contract_acyclic(&x).unwrap();
        assert_eq!(*s.s.at(0), m(&[&[1]]));
        assert!(matches!(contract_acyclic(&circle(2)), Err(Error::NotAcyclic { degree: 0 })));
    }

    #[test]
    fn inverse_of_identity_and_of_a_collapse() {
        let x = circle(3);
        let inv = homotopy_inverse(&GradedMap::identity(x.clone())).unwrap();
        assert_eq!(inv.r, GradedMap::identity(x));
        let interval = Arc::new(BasedComplex::from_diffs(0, &[1, 1], vec![m(&[&[1]])], "e").unwrap());
        let zero = Arc::new(BasedComplex::zero());
        let q = GradedMap::zero(interval.clone(), zero, 0);
        let inv = homotopy_inverse(&q).unwrap();
        assert!(inv.r.is_zero());
        Contraction { s: inv.h_src }.verify().unwrap();
    }

    #[test]
    fn not_a_weak_equivalence() {
        let x = circle(2);
        let q = GradedMap::zero(x.clone(), x, 0);
        assert!(matches!(homotopy_inverse(&q), Err(Error::NotWeakEquivalence { .. })));
    }

    #[test]
    fn augmentation_examples() {
        let p = augment(&BasedComplex::point(0)).unwrap();
        assert!(is_acyclic(&p.augmented));
        let c = augment(&circle(5)).unwrap();
        assert_eq!(integer_homology(&c.augmented, 1).betti, 1);
        let bad = BasedComplex::from_diffs(0, &[1, 1], vec![m(&[&[2]])], "e").unwrap();
        assert!(augment(&bad).is_err());
    }

    #[test]
    fn plus_construction_ranks() {
        assert_eq!(plus_construction(&BasedComplex::zero()).ranks(), vec![1]);
        let y = circle(4);
        let yp = plus_construction(&y);
        assert_eq!(yp.ranks(), vec![5, 4]);
        assert_eq!(yp.diff_norm(1), y.diff_norm(1));
        assert!(yp.is_valid());
    }

    #[test]
    fn quotient_retract_of_whole_and_empty_subcomplex() {
        // an interval v0 - e - v1 is augmentedly contractible
        let x = Arc::new(BasedComplex::from_diffs(0, &[2, 1], vec![m(&[&[-1], &[1]])], "e").unwrap());
        let all = BasedSubcomplex::new(x.clone(), vec![vec![0, 1], vec![0]]).unwrap();
        let r = augmented_retract(&all, None).unwrap();
        assert_eq!((r.y_plus.rank(0), r.y_plus.rank(1)), (1, 0));
        let none = BasedSubcomplex::new(x.clone(), vec![vec![], vec![]]).unwrap();
        let r = augmented_retract(&none, None).unwrap();
        assert_eq!(r.y_plus.ranks(), vec![3, 1]);
        assert!(r.retract.xi.norm(0).to_u32().unwrap() <= 2);
    }

    #[test]
    fn quality_from_ranks() {
        let x = BasedComplex::from_diffs(0, &[16, 16], vec![IntMatrix::zeros(16, 16)], "e").unwrap();
        let y = BasedComplex::from_diffs(0, &[3, 4], vec![IntMatrix::zeros(3, 4)], "e").unwrap();
        let (t, k) = quality_from_quotient(&x, &y, 1);
        assert_eq!(t, BigRational::from_integer(BigInt::from(4)));
        assert_eq!(k, 1.0);
    }
}
