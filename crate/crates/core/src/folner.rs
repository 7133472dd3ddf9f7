//! Følner boxes in `Z^n`, their word-metric interiors, the interior
//! subcomplexes of the coinvariant Koszul complexes, and the weak rebuildings
//! obtained by collapsing those subcomplexes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::equivariant::{koszul_basis, koszul_resolution, EquivariantComplex, GroupElem, GroupSpec, Level};
use crate::error::{Error, Result};
use crate::htpy::{augmented_retract, quality_from_quotient, AugmentedNullhomotopy, BasedSubcomplex};
use crate::matrix::IntMatrix;
use crate::rebuild::{check_quality, CertifiedRebuilding, Kappa, Quality, RebuildKind};
use crate::zchain::BasedComplex;

/// The box `F = [0, d)^n`, a transversal of `(dZ)^n` in `Z^n`. Elements are
/// numbered in the coset order of [`Level`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerBox {
    pub n: usize,
    pub d: u64,
}

impl FolnerBox {
    pub fn new(n: usize, d: u64) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidArgument("a box needs n >= 1 and d >= 1".into()));
        }
        Ok(FolnerBox { n, d })
    }

    pub fn group(&self) -> GroupSpec {
        GroupSpec::FreeAbelian { rank: self.n }
    }

    pub fn level(&self) -> Level {
        Level { moduli: vec![self.d; self.n] }
    }

    pub fn size(&self) -> usize {
        self.level().index()
    }

    pub fn element(&self, idx: usize) -> GroupElem {
        self.level().representative(idx)
    }

    pub fn contains(&self, g: &[i64]) -> bool {
        g.iter().all(|&x| x >= 0 && x < self.d as i64)
    }

    /// `|∂F| / |F|` at radius `r` for the standard generators.
    pub fn boundary_ratio(&self, r: usize) -> BigRational {
        let int = interior(self, r);
        BigRational::new(BigInt::from(int.boundary.len()), BigInt::from(self.size()))
    }
}

/// `int_{S^r}(F)` and `∂_{S^r}(F)` as sorted element indices of the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorData {
    pub radius: usize,
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
}

/// All products of at most `r` elements of `gens` (the identity included).
pub fn word_ball(gens: &[GroupElem], dim: usize, r: usize) -> Vec<GroupElem> {
    let mut ball: BTreeSet<GroupElem> = BTreeSet::new();
    ball.insert(vec![0; dim]);
    let mut frontier: Vec<GroupElem> = vec![vec![0; dim]];
    for _ in 0..r {
        let mut next = Vec::new();
        for g in &frontier {
            for s in gens {
                let h: GroupElem = g.iter().zip(s).map(|(a, b)| a + b).collect();
                if ball.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    ball.into_iter().collect()
}

/// Interior by definition: `γ ∈ int` iff `γ s ∈ F` for every `s` of word
/// length `<= r` in `gens`.
pub fn interior_with(fbox: &FolnerBox, r: usize, gens: &[GroupElem]) -> InteriorData {
    let ball = word_ball(gens, fbox.n, r);
    let (mut interior, mut boundary) = (Vec::new(), Vec::new());
    for idx in 0..fbox.size() {
        let g = fbox.element(idx);
        let inside = ball.iter().all(|s| {
            let h: GroupElem = g.iter().zip(s).map(|(a, b)| a + b).collect();
            fbox.contains(&h)
        });
        if inside {
            interior.push(idx);
        } else {
            boundary.push(idx);
        }
    }
    InteriorData { radius: r, interior, boundary }
}

/// Interior for the standard generators and their inverses.
pub fn interior(fbox: &FolnerBox, r: usize) -> InteriorData {
    let data = interior_with(fbox, r, &fbox.group().standard_generators());
    debug_assert_eq!(data.interior, product_interior(fbox, r));
    data
}

/// `Π [r, d - r)` in box indices; equals [`interior`] for boxes.
pub fn product_interior(fbox: &FolnerBox, r: usize) -> Vec<usize> {
    let r = r as i64;
    (0..fbox.size())
        .filter(|&i| fbox.element(i).iter().all(|&x| x >= r && x < fbox.d as i64 - r))
        .collect()
}

/// The generating set used for interiors: standard generators, every
/// element in the support of a differential, and all their inverses.
pub fn generating_set(x: &EquivariantComplex) -> Vec<GroupElem> {
    let g = &x.group;
    let mut s: BTreeSet<GroupElem> = g.standard_generators().into_iter().collect();
    for e in x.support() {
        s.insert(g.inverse(&e));
        s.insert(e);
    }
    s.remove(&g.identity());
    s.into_iter().collect()
}

/// `A ⊂ X_Λ` with `A_j` spanned by `I_j × int_{S^{j+1}}(F)` for `j <= n_max`
/// and zero above, for `Λ = (dZ)^n` and the box `F = [0, d)^n`.
pub fn interior_subcomplex(x: &EquivariantComplex, fbox: &FolnerBox, n_max: i32) -> Result<BasedSubcomplex> {
    interior_subcomplex_with(x, fbox, n_max, &generating_set(x))
}

/// As [`interior_subcomplex`] with an explicit generating set, which must
/// contain the supports of all differentials.
pub fn interior_subcomplex_with(
    x: &EquivariantComplex,
    fbox: &FolnerBox,
    n_max: i32,
    gens: &[GroupElem],
) -> Result<BasedSubcomplex> {
    if x.group != fbox.group() {
        return Err(Error::InvalidArgument(format!("box in Z^{} for a complex over {}", fbox.n, x.group)));
    }
    let id = x.group.identity();
    for s in x.support() {
        if s != id && !gens.contains(&s) {
            return Err(Error::InvalidArgument(format!("generating set misses {s:?} from a differential")));
        }
    }
    let ambient = Arc::new(x.coinvariants(&fbox.level()));
    let idx = fbox.size();
    let mut indices = Vec::new();
    for j in x.degrees() {
        if j > n_max || j < 0 {
            indices.push(Vec::new());
            continue;
        }
        let int = interior_with(fbox, (j + 1) as usize, gens);
        let mut v = Vec::with_capacity(x.rank(j) * int.interior.len());
        for k in 0..x.rank(j) {
            v.extend(int.interior.iter().map(|f| k * idx + f));
        }
        indices.push(v);
    }
    BasedSubcomplex::new(ambient, indices)
}

/// The contraction of the augmented Koszul complex of `Z^n` over `Z`,
/// evaluated on single basis elements `e_I · g`.
///
/// In one variable `s_{-1}(1) = 1`, `s_0(t^k) = e (1 + t + ... + t^{k-1})`
/// for `k > 0` and `-e (t^{-1} + ... + t^k)` for `k < 0`. In `n` variables
/// `s = s_1 ⊗ id + (ι ε) ⊗ s'` over the first coordinate and the rest.
#[derive(Clone, Copy, Debug)]
pub struct KoszulContraction {
    pub n: usize,
}

impl KoszulContraction {
    /// `s(e_I g)` as `(I, h) -> coefficient`; `subset` is a sorted index list.
    pub fn apply(&self, subset: &[usize], g: &[i64]) -> BTreeMap<(Vec<usize>, GroupElem), BigInt> {
        let mut out = BTreeMap::new();
        let mut g = g.to_vec();
        for c in 0..self.n {
            if subset.contains(&c) {
                // s_1 kills e, and ι ε kills e
                break;
            }
            let k = g[c];
            let mut with_c: Vec<usize> = subset.to_vec();
            with_c.push(c);
            with_c.sort_unstable();
            let (range, sign) = if k > 0 { (0..k, 1) } else { (k..0, -1) };
            for i in range {
                let mut h = g.clone();
                h[c] = i;
                *out.entry((with_c.clone(), h)).or_insert_with(BigInt::zero) += sign;
            }
            // ι ε on this coordinate, then recurse on the rest
            g[c] = 0;
        }
        out.retain(|_, v: &mut BigInt| !v.is_zero());
        out
    }

    /// `s_{-1}(1) = e_∅ · 1`.
    pub fn unit(&self) -> (Vec<usize>, GroupElem) {
        (Vec::new(), vec![0; self.n])
    }
}

/// The nullhomotopy `N = p∘s∘lift` of `A^ε -> X_Λ^ε`, where `lift` sends
/// `(k, f)` to `e_k f` with `f` in the box, `s` is the Koszul contraction
/// and `p` reduces modulo `Λ`. Interiors make `lift` a chain map on `A`.
pub fn koszul_nullhomotopy(sub: &BasedSubcomplex, fbox: &FolnerBox) -> Result<AugmentedNullhomotopy> {
    let n = fbox.n;
    let x = &sub.ambient;
    let level = fbox.level();
    let idx = level.index();
    let s = KoszulContraction { n };
    let bases: Vec<Vec<Vec<usize>>> = (0..=n).map(|j| koszul_basis(n, j)).collect();
    let pos: Vec<BTreeMap<Vec<usize>, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect()).collect();
    if x.hi() != n as i32 || x.rank(0) != idx {
        return Err(Error::InvalidArgument("ambient is not a coinvariant Koszul complex of the box".into()));
    }
    let mut maps = Vec::new();
    let (u_set, u_g) = s.unit();
    let unit_row = pos[0][&u_set] * idx + level.coset(&u_g);
    maps.push(IntMatrix::from_triplets(x.rank(0), 1, vec![(unit_row, 0, BigInt::one())]));
    for j in 0..=n as i32 {
        let cols = sub.idx(j);
        let rows = x.rank(j + 1);
        let mut entries = Vec::new();
        for (c, &b) in cols.iter().enumerate() {
            let (k, f) = (b / idx, b % idx);
            let subset = &bases[j as usize][k];
            for ((set, h), coeff) in s.apply(subset, &level.representative(f)) {
                let row = pos[set.len()][&set] * idx + level.coset(&h);
                entries.push((row, c, coeff));
            }
        }
        maps.push(IntMatrix::from_triplets(rows, cols.len(), entries));
    }
    Ok(AugmentedNullhomotopy { maps })
}

/// A certified weak rebuilding of `(Z^n)`-coinvariants at `Λ = (dZ)^n`.
#[derive(Clone, Debug)]
pub struct AmenableRebuilding {
    pub n: usize,
    pub d: u64,
    pub ambient: Arc<BasedComplex>,
    pub interior_ranks: Vec<usize>,
    pub y_plus_ranks: Vec<usize>,
    /// Largest certified `T`: `min_j rk X_j / rk Y^+_j`.
    pub t_max: BigRational,
    /// `(rk X_j - rk A_j) / rk X_j` per degree.
    pub boundary_fractions: Vec<BigRational>,
    pub certificate: CertifiedRebuilding,
}

/// `T'`, `κ` and the retract for Koszul(`n`) at modulus `d`; certifies a weak
/// `n`-rebuilding at the requested `T` (default `T'`).
pub fn amenable_weak_rebuilding(n: usize, d: u64, t: Option<&BigRational>) -> Result<AmenableRebuilding> {
    let x = koszul_resolution(n)?;
    let fbox = FolnerBox::new(n, d)?;
    let sub = interior_subcomplex(&x, &fbox, n as i32)?;
    let null = koszul_nullhomotopy(&sub, &fbox)?;
    let ar = augmented_retract(&sub, Some(&null))?;
    let ambient = sub.ambient.clone();
    let (t_max, kappa) = quality_from_quotient(&ambient, &ar.y_plus, n as i32);
    let one = BigRational::one();
    if t_max < one {
        return Err(Error::InvalidArgument(format!(
            "box of side {d} is too small: interiors leave T' = {t_max} < 1"
        )));
    }
    let t = match t {
        Some(t) if *t > t_max => {
            return Err(Error::InvalidArgument(format!("T = {t} exceeds the largest certified T' = {t_max}")));
        }
        Some(t) => t.clone(),
        None => t_max.clone(),
    };
    let kappa = if kappa == 1.0 { Kappa::integer(1) } else { Kappa::float(kappa) };
    let quality = Quality::new(t, kappa)?;
    let certificate = check_quality(&ar.retract, n as i32, &quality, RebuildKind::Weak)?;
    let boundary_fractions = ambient
        .degrees()
        .map(|j| {
            let total = ambient.rank(j);
            BigRational::new(BigInt::from(total - sub.idx(j).len()), BigInt::from(total))
        })
        .collect();
    Ok(AmenableRebuilding {
        n,
        d,
        interior_ranks: sub.ranks(),
        y_plus_ranks: (0..=n as i32).map(|j| ar.y_plus.rank(j)).collect(),
        ambient,
        t_max,
        boundary_fractions,
        certificate,
    })
}
