//! Bounded based free chain complexes over the integers and their calculus:
//! suspensions, sums, mapping cones, cone maps of homotopy commutative squares,
//! cube fillers, truncations, skeleta and projective replacement.

use std::borrow::Cow;
use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology;
use crate::matrix::{IntMatrix, Triplet};

/// A bounded chain complex of finitely generated free abelian groups with
/// chosen bases. Degrees run over `lo..=hi`; everything outside is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedComplex {
    lo: i32,
    labels: Vec<Vec<String>>,
    // diffs[k] is the differential out of degree lo + k.
    diffs: Vec<IntMatrix>,
}

impl BasedComplex {
    /// The zero complex.
    pub fn zero() -> Self {
        BasedComplex { lo: 0, labels: Vec::new(), diffs: Vec::new() }
    }

    /// A single copy of `Z` in degree `deg`.
    pub fn point(deg: i32) -> Self {
        BasedComplex {
            lo: deg,
            labels: vec![vec!["pt".to_string()]],
            diffs: vec![IntMatrix::zeros(0, 1)],
        }
    }

    /// Builds and validates a complex. `diffs[k]` is `d_{lo+k}`; the bottom one
    /// must have zero rows.
    pub fn new(lo: i32, labels: Vec<Vec<String>>, diffs: Vec<IntMatrix>) -> Result<Self> {
        let x = Self::new_unchecked(lo, labels, diffs);
        let report = x.validate();
        if report.is_empty() {
            Ok(x)
        } else {
            Err(Error::InvalidComplex(report.join("; ")))
        }
    }

    pub fn new_unchecked(lo: i32, labels: Vec<Vec<String>>, diffs: Vec<IntMatrix>) -> Self {
        BasedComplex { lo, labels, diffs }
    }

    /// Builds a complex with generated labels `{prefix}{i}` from ranks and the
    /// differentials `d_{lo+1}, d_{lo+2}, ...`.
    pub fn from_diffs(lo: i32, ranks: &[usize], upper: Vec<IntMatrix>, prefix: &str) -> Result<Self> {
        if upper.len() + 1 != ranks.len().max(1) {
            return Err(Error::Shape(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                upper.len()
            )));
        }
        if ranks.is_empty() {
            return Ok(Self::zero());
        }
        let labels = ranks
            .iter()
            .map(|&r| (0..r).map(|i| format!("{prefix}{i}")).collect())
            .collect();
        let mut diffs = vec![IntMatrix::zeros(0, ranks[0])];
        diffs.extend(upper);
        Self::new(lo, labels, diffs)
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Top degree; `lo - 1` for a complex with no degrees.
    pub fn hi(&self) -> i32 {
        self.lo + self.labels.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    fn index(&self, j: i32) -> Option<usize> {
        if j < self.lo || j > self.hi() {
            None
        } else {
            Some((j - self.lo) as usize)
        }
    }

    pub fn rank(&self, j: i32) -> usize {
        self.index(j).map(|k| self.labels[k].len()).unwrap_or(0)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn labels(&self, j: i32) -> &[String] {
        self.index(j).map(|k| self.labels[k].as_slice()).unwrap_or(&[])
    }

    /// The differential `d_j : X_j -> X_{j-1}`.
    pub fn diff(&self, j: i32) -> Cow<'_, IntMatrix> {
        match self.index(j) {
            Some(k) if k > 0 || self.diffs[k].rows() == self.rank(j - 1) => Cow::Borrowed(&self.diffs[k]),
            _ => Cow::Owned(IntMatrix::zeros(self.rank(j - 1), self.rank(j))),
        }
    }

    /// `||d_j||` in the l1 operator norm.
    pub fn diff_norm(&self, j: i32) -> BigInt {
        self.diff(j).l1_norm()
    }

    pub fn is_zero(&self) -> bool {
        self.total_rank() == 0
    }

    /// Lists every violated invariant; empty iff the complex is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut report = Vec::new();
        if self.diffs.len() != self.labels.len() {
            report.push(format!(
                "{} degrees of labels but {} differentials",
                self.labels.len(),
                self.diffs.len()
            ));
            return report;
        }
        for (k, labels) in self.labels.iter().enumerate() {
            let j = self.lo + k as i32;
            let mut seen = HashSet::new();
            for l in labels {
                if !seen.insert(l) {
                    report.push(format!("duplicate basis label `{l}` in degree {j}"));
                }
            }
            let d = &self.diffs[k];
            let want = (if k == 0 { 0 } else { self.labels[k - 1].len() }, labels.len());
            if d.shape() != want {
                report.push(format!(
                    "d_{j} has shape {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    want.0,
                    want.1
                ));
            }
        }
        if !report.is_empty() {
            return report;
        }
        for k in 1..self.diffs.len() {
            let j = self.lo + k as i32;
            if !self.diffs[k - 1].mul(&self.diffs[k]).is_zero() {
                report.push(format!("∂∂ ≠ 0: d_{} d_{} is nonzero", j - 1, j));
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `Σ^k X`: `(Σ^k X)_j = X_{j-k}` with differential `(-1)^k d`.
    pub fn suspend(&self, k: i32) -> BasedComplex {
        let diffs = if k % 2 == 0 {
            self.diffs.clone()
        } else {
            self.diffs.iter().map(IntMatrix::neg).collect()
        };
        BasedComplex { lo: self.lo + k, labels: self.labels.clone(), diffs }
    }

    /// Degreewise block sum, summands of `self` first. Labels are kept unless
    /// they clash, in which case all are prefixed with `0:` and `1:`.
    pub fn direct_sum(&self, other: &BasedComplex) -> BasedComplex {
        if other.labels.is_empty() {
            return self.clone();
        }
        if self.labels.is_empty() {
            return other.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let clash = (lo..=hi).any(|j| {
            let s: HashSet<&String> = self.labels(j).iter().collect();
            other.labels(j).iter().any(|l| s.contains(l))
        });
        let mut labels = Vec::new();
        let mut diffs = Vec::new();
        for j in lo..=hi {
            let mut l: Vec<String> = Vec::new();
            if clash {
                l.extend(self.labels(j).iter().map(|s| format!("0:{s}")));
                l.extend(other.labels(j).iter().map(|s| format!("1:{s}")));
            } else {
                l.extend(self.labels(j).iter().cloned());
                l.extend(other.labels(j).iter().cloned());
            }
            labels.push(l);
            let d = if j == lo {
                IntMatrix::zeros(0, self.rank(j) + other.rank(j))
            } else {
                self.diff(j).block_diag(&other.diff(j))
            };
            diffs.push(d);
        }
        BasedComplex { lo, labels, diffs }
    }

    /// The `k`-skeleton: everything above degree `k` removed.
    pub fn skeleton(&self, k: i32) -> BasedComplex {
        if k < self.lo {
            return BasedComplex { lo: self.lo, labels: Vec::new(), diffs: Vec::new() };
        }
        let keep = ((k - self.lo + 1) as usize).min(self.labels.len());
        BasedComplex {
            lo: self.lo,
            labels: self.labels[..keep].to_vec(),
            diffs: self.diffs[..keep].to_vec(),
        }
    }

    /// Same complex placed over a wider degree range (extra degrees have rank 0).
    pub fn widen(&self, lo: i32, hi: i32) -> BasedComplex {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let mut labels = Vec::new();
        let mut diffs = Vec::new();
        for j in lo..=hi {
            labels.push(self.labels(j).to_vec());
            diffs.push(if j == lo {
                IntMatrix::zeros(0, self.rank(j))
            } else {
                self.diff(j).into_owned()
            });
        }
        BasedComplex { lo, labels, diffs }
    }

    /// Drops rank-0 degrees from both ends.
    pub fn trimmed(&self) -> BasedComplex {
        let ranks = self.ranks();
        let first = ranks.iter().position(|&r| r > 0);
        let Some(first) = first else {
            return BasedComplex::zero();
        };
        let last = ranks.iter().rposition(|&r| r > 0).unwrap();
        let lo = self.lo + first as i32;
        let mut diffs = self.diffs[first..=last].to_vec();
        diffs[0] = IntMatrix::zeros(0, ranks[first]);
        BasedComplex { lo, labels: self.labels[first..=last].to_vec(), diffs }
    }

    /// Relabels every basis element with `f(degree, label)`.
    pub fn relabel(&self, f: impl Fn(i32, &str) -> String) -> BasedComplex {
        let labels = self
            .labels
            .iter()
            .enumerate()
            .map(|(k, ls)| ls.iter().map(|l| f(self.lo + k as i32, l)).collect())
            .collect();
        BasedComplex { lo: self.lo, labels, diffs: self.diffs.clone() }
    }

    /// `τ_{<n} Y = Cone(Y^n -> Y)` where `Y^n` is `ker d_n` in degree `n` and
    /// `Y` above. The kernel basis is in Hermite normal form.
    pub fn truncate_below(&self, n: i32) -> Result<BasedComplex> {
        let sub = self.kernel_subcomplex(n)?;
        Ok(cone(&sub)?.complex.as_ref().clone())
    }

    /// The inclusion `Y^n -> Y` used by [`truncate_below`](Self::truncate_below).
    pub fn kernel_subcomplex(&self, n: i32) -> Result<ChainMap> {
        let y = Arc::new(self.clone());
        let dn = self.diff(n);
        let kernel = homology::kernel_basis(&dn);
        let hi = self.hi().max(n);
        let mut labels = Vec::new();
        let mut diffs = Vec::new();
        labels.push((0..kernel.cols()).map(|i| format!("ker{i}")).collect::<Vec<_>>());
        diffs.push(IntMatrix::zeros(0, kernel.cols()));
        for j in n + 1..=hi {
            labels.push(self.labels(j).to_vec());
            if j == n + 1 {
                // express d_{n+1} in the kernel basis
                let d = self.diff(n + 1);
                let solver = homology::Solver::new(&kernel);
                let mut cols = Vec::with_capacity(d.cols());
                for c in 0..d.cols() {
                    let b = column_dense(&d, c);
                    let z = solver.solve(&b).ok_or_else(|| {
                        Error::InvalidComplex(format!("d_{} does not land in ker d_{n}", n + 1))
                    })?;
                    cols.push(dense_to_column(&z));
                }
                diffs.push(IntMatrix::from_columns(kernel.cols(), cols));
            } else {
                diffs.push(self.diff(j).into_owned());
            }
        }
        let sub = Arc::new(BasedComplex::new(n, labels, diffs)?);
        let maps = (n..=hi)
            .map(|j| if j == n { kernel.clone() } else { IntMatrix::identity(self.rank(j)) })
            .collect();
        GradedMap::chain_map(sub, y, maps)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            degrees: self
                .degrees()
                .map(|j| DegreeJson {
                    degree: j,
                    rank: self.rank(j),
                    basis: self.labels(j).to_vec(),
                    differential: self.diff(j).to_triplets(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<BasedComplex> {
        if json.degrees.is_empty() {
            return Ok(BasedComplex::zero());
        }
        let mut degs: Vec<&DegreeJson> = json.degrees.iter().collect();
        degs.sort_by_key(|d| d.degree);
        for w in degs.windows(2) {
            if w[0].degree == w[1].degree {
                return Err(Error::InvalidComplex(format!("degree {} listed twice", w[0].degree)));
            }
        }
        let lo = degs[0].degree;
        let hi = degs.last().unwrap().degree;
        let find = |j: i32| degs.iter().find(|d| d.degree == j).copied();
        let mut labels = Vec::new();
        let mut diffs = Vec::new();
        let mut prev_rank = 0usize;
        for j in lo..=hi {
            let (rank, basis, trip) = match find(j) {
                Some(d) => {
                    let basis = if d.basis.is_empty() && d.rank > 0 {
                        (0..d.rank).map(|i| format!("b{i}")).collect()
                    } else {
                        d.basis.clone()
                    };
                    if basis.len() != d.rank {
                        return Err(Error::InvalidComplex(format!(
                            "degree {j}: rank {} but {} basis labels",
                            d.rank,
                            basis.len()
                        )));
                    }
                    (d.rank, basis, d.differential.as_slice())
                }
                None => (0, Vec::new(), &[][..]),
            };
            let rows = if j == lo { 0 } else { prev_rank };
            let m = IntMatrix::from_triplet_list(rows, rank, trip)
                .map_err(|e| Error::InvalidComplex(format!("degree {j}: {e}")))?;
            labels.push(basis);
            diffs.push(m);
            prev_rank = rank;
        }
        BasedComplex::new(lo, labels, diffs)
    }
}

/// Serialized form of a [`BasedComplex`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub degrees: Vec<DegreeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegreeJson {
    pub degree: i32,
    pub rank: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub differential: Vec<Triplet>,
}

pub(crate) fn column_dense(m: &IntMatrix, c: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); m.rows()];
    for (r, x) in m.column(c) {
        v[*r] = x.clone();
    }
    v
}

pub(crate) fn dense_to_column(v: &[BigInt]) -> Vec<(usize, BigInt)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// A family of matrices `X_j -> Y_{j+degree}`. Chain maps have degree 0,
/// chain homotopies degree 1, cube fillers degree 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: Arc<BasedComplex>,
    target: Arc<BasedComplex>,
    degree: i32,
    // indexed by source degree
    maps: Vec<IntMatrix>,
}

/// Degree-0 graded map satisfying `d f = f d`.
pub type ChainMap = GradedMap;
/// Degree-1 graded map; `H: f ≃ g` means `dH + Hd = f - g`.
pub type ChainHomotopy = GradedMap;

fn same(a: &Arc<BasedComplex>, b: &Arc<BasedComplex>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GradedMap {
    /// Builds a graded map from matrices indexed by the source degrees,
    /// checking shapes only.
    pub fn new(
        source: Arc<BasedComplex>,
        target: Arc<BasedComplex>,
        degree: i32,
        maps: Vec<IntMatrix>,
    ) -> Result<Self> {
        if maps.len() != source.labels.len() {
            return Err(Error::Shape(format!(
                "graded map needs {} components, got {}",
                source.labels.len(),
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            let j = source.lo + k as i32;
            let want = (target.rank(j + degree), source.rank(j));
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "component in degree {j} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(GradedMap { source, target, degree, maps })
    }

    pub fn from_fn(
        source: Arc<BasedComplex>,
        target: Arc<BasedComplex>,
        degree: i32,
        mut f: impl FnMut(i32) -> IntMatrix,
    ) -> Result<Self> {
        let maps = source.degrees().map(&mut f).collect();
        Self::new(source, target, degree, maps)
    }

    /// Builds a degree-0 map and checks that it commutes with the differentials.
    pub fn chain_map(source: Arc<BasedComplex>, target: Arc<BasedComplex>, maps: Vec<IntMatrix>) -> Result<Self> {
        let f = Self::new(source, target, 0, maps)?;
        f.check_chain_map()?;
        Ok(f)
    }

    pub fn zero(source: Arc<BasedComplex>, target: Arc<BasedComplex>, degree: i32) -> Self {
        let maps = source
            .degrees()
            .map(|j| IntMatrix::zeros(target.rank(j + degree), source.rank(j)))
            .collect();
        GradedMap { source, target, degree, maps }
    }

    pub fn identity(x: Arc<BasedComplex>) -> Self {
        let maps = x.degrees().map(|j| IntMatrix::identity(x.rank(j))).collect();
        GradedMap { source: x.clone(), target: x, degree: 0, maps }
    }

    pub fn source(&self) -> &Arc<BasedComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BasedComplex> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Component out of source degree `j`.
    pub fn at(&self, j: i32) -> Cow<'_, IntMatrix> {
        match self.source.index(j) {
            Some(k) => Cow::Borrowed(&self.maps[k]),
            None => Cow::Owned(IntMatrix::zeros(self.target.rank(j + self.degree), self.source.rank(j))),
        }
    }

    pub fn components(&self) -> &[IntMatrix] {
        &self.maps
    }

    pub fn norm(&self, j: i32) -> BigInt {
        self.at(j).l1_norm()
    }

    /// `max_{j <= n} ||f_j||`.
    pub fn max_norm_upto(&self, n: i32) -> BigInt {
        self.source
            .degrees()
            .filter(|&j| j <= n)
            .map(|j| self.norm(j))
            .max()
            .unwrap_or_default()
    }

    /// Same matrices viewed between new (equal-rank) complexes.
    pub fn retarget(&self, source: Arc<BasedComplex>, target: Arc<BasedComplex>) -> Result<Self> {
        let maps = source.degrees().map(|j| self.at(j).into_owned()).collect();
        Self::new(source, target, self.degree, maps)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if !same(&other.target, &self.source) {
            return Err(Error::Shape("composition of maps with mismatched complexes".into()));
        }
        let deg = other.degree;
        let maps = other
            .source
            .degrees()
            .map(|j| self.at(j + deg).mul(&other.at(j)))
            .collect();
        GradedMap::new(other.source.clone(), self.target.clone(), self.degree + other.degree, maps)
    }

    fn combine(&self, other: &GradedMap, op: impl Fn(&IntMatrix, &IntMatrix) -> IntMatrix) -> Result<GradedMap> {
        if !same(&self.source, &other.source) || !same(&self.target, &other.target) || self.degree != other.degree {
            return Err(Error::Shape("sum of maps with mismatched complexes or degrees".into()));
        }
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| op(a, b)).collect();
        Ok(GradedMap { source: self.source.clone(), target: self.target.clone(), degree: self.degree, maps })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, IntMatrix::add)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, IntMatrix::sub)
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, c: &BigInt) -> GradedMap {
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            maps: self.maps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(IntMatrix::is_zero)
    }

    /// `d ∘ self` (differential of the target after the map), per source degree.
    pub fn d_after(&self, j: i32) -> IntMatrix {
        self.target.diff(j + self.degree).mul(&self.at(j))
    }

    /// `self ∘ d` (map after the source differential), out of source degree `j`.
    pub fn d_before(&self, j: i32) -> IntMatrix {
        self.at(j - 1).mul(&self.source.diff(j))
    }

    /// `dF - (-1)^deg F d`, the graded commutator with the differentials.
    pub fn boundary(&self) -> GradedMap {
        let odd = self.degree.rem_euclid(2) == 1;
        let maps = self
            .source
            .degrees()
            .map(|j| {
                let a = self.d_after(j);
                let b = self.d_before(j);
                if odd {
                    a.add(&b)
                } else {
                    a.sub(&b)
                }
            })
            .collect();
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree - 1,
            maps,
        }
    }

    pub fn check_chain_map(&self) -> Result<()> {
        if self.degree != 0 {
            return Err(Error::Shape(format!("chain map must have degree 0, not {}", self.degree)));
        }
        for j in self.source.degrees() {
            let (da, f, fb, db) = (self.target.diff(j), self.at(j), self.at(j - 1), self.source.diff(j));
            if !IntMatrix::combination_is_zero(&[(1, &da, &f), (-1, &fb, &db)], &[], 0) {
                return Err(Error::NotChainMap { degree: j, detail: "d f ≠ f d".into() });
            }
        }
        Ok(())
    }

    /// Checks `H: f ≃ g`, i.e. `dH + Hd = f - g`, for `self = H`.
    pub fn check_homotopy(&self, f: &ChainMap, g: &ChainMap, what: &str) -> Result<()> {
        if self.degree != 1 {
            return Err(Error::Shape(format!("homotopy must have degree 1, not {}", self.degree)));
        }
        if !same(&self.source, &f.source) || !same(&self.target, &f.target) {
            return Err(Error::Shape(format!("homotopy `{what}` between mismatched complexes")));
        }
        for j in self.source.degrees() {
            let (dt, h, hb, ds) = (self.target.diff(j + 1), self.at(j), self.at(j - 1), self.source.diff(j));
            let (fj, gj) = (f.at(j), g.at(j));
            if !IntMatrix::combination_is_zero(&[(1, &dt, &h), (1, &hb, &ds)], &[(-1, &fj), (1, &gj)], 0) {
                return Err(Error::HomotopyIdentity { degree: j, what: what.to_string() });
            }
        }
        Ok(())
    }

    /// Checks `H: id ≃ g∘f`, i.e. `dH + Hd = id - g f`, for `self = H`,
    /// without forming the composite.
    pub fn check_homotopy_from_identity(&self, g: &ChainMap, f: &ChainMap, what: &str) -> Result<()> {
        if self.degree != 1 || f.degree != 0 || g.degree != 0 {
            return Err(Error::Shape(format!("homotopy `{what}` has the wrong degrees")));
        }
        if !same(&self.source, &self.target) || !same(&f.source, &self.source) || !same(&g.target, &self.source) {
            return Err(Error::Shape(format!("homotopy `{what}` between mismatched complexes")));
        }
        if !same(&f.target, &g.source) {
            return Err(Error::Shape("composition of maps with mismatched complexes".into()));
        }
        for j in self.source.degrees() {
            let (dt, h, hb, ds) = (self.target.diff(j + 1), self.at(j), self.at(j - 1), self.source.diff(j));
            let (gj, fj) = (g.at(j), f.at(j));
            if !IntMatrix::combination_is_zero(&[(1, &dt, &h), (1, &hb, &ds), (1, &gj, &fj)], &[], -1) {
                return Err(Error::HomotopyIdentity { degree: j, what: what.to_string() });
            }
        }
        Ok(())
    }

    /// `Σ^k` applied to source and target; components pick up `(-1)^{deg k}`.
    pub fn suspend(&self, k: i32) -> GradedMap {
        let source = Arc::new(self.source.suspend(k));
        let target = Arc::new(self.target.suspend(k));
        let flip = (self.degree * k).rem_euclid(2) == 1;
        let maps = if flip { self.maps.iter().map(IntMatrix::neg).collect() } else { self.maps.clone() };
        GradedMap { source, target, degree: self.degree, maps }
    }

    /// Block sum `f ⊕ g : X ⊕ X' -> Y ⊕ Y'`.
    pub fn direct_sum(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.degree != other.degree {
            return Err(Error::Shape("direct sum of maps of different degree".into()));
        }
        let source = Arc::new(self.source.direct_sum(&other.source));
        let target = Arc::new(self.target.direct_sum(&other.target));
        GradedMap::from_fn(source, target, self.degree, |j| self.at(j).block_diag(&other.at(j)))
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            degree: self.degree,
            components: self
                .source
                .degrees()
                .map(|j| ComponentJson {
                    degree: j,
                    rows: self.target.rank(j + self.degree),
                    cols: self.source.rank(j),
                    entries: self.at(j).to_triplets(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &MapJson, source: Arc<BasedComplex>, target: Arc<BasedComplex>) -> Result<GradedMap> {
        let maps = source
            .degrees()
            .map(|j| {
                let rows = target.rank(j + json.degree);
                let cols = source.rank(j);
                match json.components.iter().find(|c| c.degree == j) {
                    Some(c) => IntMatrix::from_triplet_list(rows, cols, &c.entries)
                        .map_err(|e| Error::Shape(format!("map component {j}: {e}"))),
                    None => Ok(IntMatrix::zeros(rows, cols)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        GradedMap::new(source, target, json.degree, maps)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapJson {
    pub degree: i32,
    pub components: Vec<ComponentJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComponentJson {
    pub degree: i32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Triplet>,
}

/// Mapping cone of a chain map together with the maps of the split sequence
/// `0 -> Y -> Cone(f) -> ΣX -> 0`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: Arc<BasedComplex>,
    /// `ι(y) = (0, y)`.
    pub iota: ChainMap,
    /// `π(x, y) = x`, into `ΣX`.
    pub pi: ChainMap,
    /// Degreewise section `σ(x, y) = y` of `ι`; not a chain map.
    pub sigma: GradedMap,
}

/// The underlying complex of `Cone(f)`, with `X_{j-1}` listed before `Y_j`.
pub fn cone_complex(f: &ChainMap) -> BasedComplex {
    let x = &f.source;
    let y = &f.target;
    if x.labels.is_empty() && y.labels.is_empty() {
        return BasedComplex::zero();
    }
    let lo = if x.labels.is_empty() {
        y.lo
    } else if y.labels.is_empty() {
        x.lo + 1
    } else {
        (x.lo + 1).min(y.lo)
    };
    let hi = (x.hi() + 1).max(y.hi());
    let mut labels = Vec::new();
    let mut diffs = Vec::new();
    for j in lo..=hi {
        let mut l: Vec<String> = x.labels(j - 1).iter().map(|s| format!("cx:{s}")).collect();
        l.extend(y.labels(j).iter().map(|s| format!("cy:{s}")));
        labels.push(l);
        let d = if j == lo {
            IntMatrix::zeros(0, x.rank(j - 1) + y.rank(j))
        } else {
            IntMatrix::block2(
                &x.diff(j - 1).neg(),
                &IntMatrix::zeros(x.rank(j - 2), y.rank(j)),
                &f.at(j - 1),
                &y.diff(j),
            )
        };
        diffs.push(d);
    }
    BasedComplex { lo, labels, diffs }
}

/// `Cone(f)_j = X_{j-1} ⊕ Y_j`, `d(x, y) = (-dx, dy + f x)`.
pub fn cone(f: &ChainMap) -> Result<Cone> {
    f.check_chain_map()?;
    Ok(cone_unchecked(f))
}

pub(crate) fn cone_unchecked(f: &ChainMap) -> Cone {
    let c = Arc::new(cone_complex(f));
    let x = f.source.clone();
    let y = f.target.clone();
    let sx = Arc::new(x.suspend(1));
    let iota = GradedMap::from_fn(y.clone(), c.clone(), 0, |j| {
        IntMatrix::zeros(x.rank(j - 1), y.rank(j)).vstack(&IntMatrix::identity(y.rank(j)))
    })
    .expect("cone inclusion shape");
    let pi = GradedMap::from_fn(c.clone(), sx, 0, |j| {
        IntMatrix::identity(x.rank(j - 1)).hstack(&IntMatrix::zeros(x.rank(j - 1), y.rank(j)))
    })
    .expect("cone projection shape");
    let sigma = GradedMap::from_fn(c.clone(), y.clone(), 0, |j| {
        IntMatrix::zeros(y.rank(j), x.rank(j - 1)).hstack(&IntMatrix::identity(y.rank(j)))
    })
    .expect("cone section shape");
    Cone { complex: c, iota, pi, sigma }
}

/// Chain maps `f: X -> Y`, `g: Z -> W`, `a: X -> Z`, `b: Y -> W` with
/// `H: g∘a ≃ b∘f`.
#[derive(Clone, Debug)]
pub struct HomotopySquare {
    pub f: ChainMap,
    pub g: ChainMap,
    pub a: ChainMap,
    pub b: ChainMap,
    pub h: ChainHomotopy,
}

impl HomotopySquare {
    pub fn new(f: ChainMap, g: ChainMap, a: ChainMap, b: ChainMap, h: ChainHomotopy) -> Result<Self> {
        let sq = HomotopySquare { f, g, a, b, h };
        sq.verify()?;
        Ok(sq)
    }

    /// A strictly commuting square (`H = 0`).
    pub fn strict(f: ChainMap, g: ChainMap, a: ChainMap, b: ChainMap) -> Result<Self> {
        let h = GradedMap::zero(f.source.clone(), g.target.clone(), 1);
        Self::new(f, g, a, b, h)
    }

    pub fn verify(&self) -> Result<()> {
        for m in [&self.f, &self.g, &self.a, &self.b] {
            m.check_chain_map()?;
        }
        let ga = self.g.compose(&self.a)?;
        let bf = self.b.compose(&self.f)?;
        self.h.check_homotopy(&ga, &bf, "g∘a ≃ b∘f")
    }

    /// `(a, b; H): Cone(f) -> Cone(g)`, `(x, y) ↦ (a x, b y - H x)`.
    pub fn cone_map(&self) -> Result<ChainMap> {
        self.verify()?;
        let cf = Arc::new(cone_complex(&self.f));
        let cg = Arc::new(cone_complex(&self.g));
        self.cone_map_between(cf, cg)
    }

    pub(crate) fn cone_map_between(&self, cf: Arc<BasedComplex>, cg: Arc<BasedComplex>) -> Result<ChainMap> {
        let y = &self.f.target;
        let m = GradedMap::from_fn(cf, cg, 0, |j| {
            IntMatrix::block2(
                &self.a.at(j - 1),
                &IntMatrix::zeros(self.a.target.rank(j - 1), y.rank(j)),
                &self.h.at(j - 1).neg(),
                &self.b.at(j),
            )
        })?;
        m.check_chain_map()?;
        Ok(m)
    }
}

/// The cone map `(a, b; H)` of a square; see [`HomotopySquare::cone_map`].
pub fn cone_map(square: &HomotopySquare) -> Result<ChainMap> {
    square.cone_map()
}

/// A homotopy commutative cube. The back face is the square `f, g, a, b; H`
/// with `f: X -> Y`, `g: Z -> W`; the front face is `f', g', a', b'; H'`
/// over `X', Y', Z', W'`; the edges `ξ: X -> X'`, `υ: Y -> Y'`,
/// `ζ: Z -> Z'`, `ω: W -> W'` connect them. The side homotopies are
/// `A: ζa ≃ a'ξ`, `B: ωb ≃ b'υ`, `F: f'ξ ≃ υf`, `G: g'ζ ≃ ωg`, and the filler
/// `Φ: X_* -> W'_{*+2}` satisfies
/// `dΦ - Φd = ωH - H'ξ + Bf - g'A + Ga - b'F`.
#[derive(Clone, Debug)]
pub struct HomotopyCube {
    pub back: HomotopySquare,
    pub front: HomotopySquare,
    pub xi: ChainMap,
    pub upsilon: ChainMap,
    pub zeta: ChainMap,
    pub omega: ChainMap,
    pub a_face: ChainHomotopy,
    pub b_face: ChainHomotopy,
    pub f_face: ChainHomotopy,
    pub g_face: ChainHomotopy,
    pub phi: GradedMap,
}

impl HomotopyCube {
    /// The side squares as homotopy commutative squares (in the orientation
    /// used by the cone maps of the filled square).
    pub fn top_square(&self) -> HomotopySquare {
        // f: X -> Y, f': X' -> Y', ξ, υ, F: f'ξ ≃ υf
        HomotopySquare {
            f: self.back.f.clone(),
            g: self.front.f.clone(),
            a: self.xi.clone(),
            b: self.upsilon.clone(),
            h: self.f_face.clone(),
        }
    }

    pub fn bottom_square(&self) -> HomotopySquare {
        HomotopySquare {
            f: self.back.g.clone(),
            g: self.front.g.clone(),
            a: self.zeta.clone(),
            b: self.omega.clone(),
            h: self.g_face.clone(),
        }
    }

    /// Checks every face and the filler identity.
    pub fn verify(&self) -> Result<()> {
        self.back.verify()?;
        self.front.verify()?;
        self.top_square().verify()?;
        self.bottom_square().verify()?;
        for m in [&self.xi, &self.upsilon, &self.zeta, &self.omega] {
            m.check_chain_map()?;
        }
        let za = self.zeta.compose(&self.back.a)?;
        let apx = self.front.a.compose(&self.xi)?;
        self.a_face.check_homotopy(&za, &apx, "A: ζa ≃ a'ξ")?;
        let wb = self.omega.compose(&self.back.b)?;
        let bpu = self.front.b.compose(&self.upsilon)?;
        self.b_face.check_homotopy(&wb, &bpu, "B: ωb ≃ b'υ")?;
        let rhs = self
            .omega
            .compose(&self.back.h)?
            .sub(&self.front.h.compose(&self.xi)?)?
            .add(&self.b_face.compose(&self.back.f)?)?
            .sub(&self.front.g.compose(&self.a_face)?)?
            .add(&self.g_face.compose(&self.back.a)?)?
            .sub(&self.front.b.compose(&self.f_face)?)?;
        if self.phi.degree != 2 {
            return Err(Error::Shape("cube filler must have degree 2".into()));
        }
        let lhs = self.phi.boundary();
        for j in self.phi.source.degrees() {
            if lhs.at(j) != rhs.at(j) {
                return Err(Error::HomotopyIdentity { degree: j, what: "cube filler".into() });
            }
        }
        Ok(())
    }
}

/// The square of cone maps induced by a cube:
/// `Cone(f) --(ξ,υ;F)--> Cone(f')`, `Cone(f) --(a,b;H)--> Cone(g)`,
/// `Cone(f') --(a',b';H')--> Cone(g')`, `Cone(g) --(ζ,ω;G)--> Cone(g')`,
/// with `Ψ(x, y) = (-A x, B y - Φ x)` a homotopy
/// `(ζ,ω;G)∘(a,b;H) ≃ (a',b';H')∘(ξ,υ;F)`.
pub fn cube_fill_square(cube: &HomotopyCube) -> Result<HomotopySquare> {
    cube.verify()?;
    let cf = Arc::new(cone_complex(&cube.back.f));
    let cfp = Arc::new(cone_complex(&cube.front.f));
    let cg = Arc::new(cone_complex(&cube.back.g));
    let cgp = Arc::new(cone_complex(&cube.front.g));
    let top = cube.top_square().cone_map_between(cf.clone(), cfp.clone())?;
    let left = cube.back.cone_map_between(cf.clone(), cg.clone())?;
    let right = cube.front.cone_map_between(cfp, cgp.clone())?;
    let bottom = cube.bottom_square().cone_map_between(cg, cgp.clone())?;
    let y = &cube.back.f.target;
    let zp = &cube.front.g.source;
    let psi = GradedMap::from_fn(cf, cgp, 1, |j| {
        IntMatrix::block2(
            &cube.a_face.at(j - 1).neg(),
            &IntMatrix::zeros(zp.rank(j), y.rank(j)),
            &cube.phi.at(j - 1).neg(),
            &cube.b_face.at(j),
        )
    })?;
    // square: f = top, g = bottom, a = left, b = right, H: bottom∘left ≃ right∘top
    HomotopySquare::new(top, bottom, left, right, psi)
}

/// Output of [`projective_replacement`].
#[derive(Clone, Debug)]
pub struct ProjectiveReplacement {
    pub complex: Arc<BasedComplex>,
    /// The weak equivalence `X̂ -> X`.
    pub q: ChainMap,
    /// `X̂^[k]` together with `q^k: X̂^[k] -> X^(k)`, for `k = 0..=top`.
    pub stages: Vec<(Arc<BasedComplex>, ChainMap)>,
    /// The lifted attaching maps `Σ^{k-1} P^k -> X̂^[k-1]`, for `k >= 1`.
    pub attaching: Vec<ChainMap>,
}

/// A free resolution `P -> M` of a free module placed in degree 0:
/// `P` lives in degrees `>= 0` and `augmentation: P_0 -> M`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: Arc<BasedComplex>,
    pub augmentation: IntMatrix,
}

impl Resolution {
    /// The trivial resolution of `Z^rank` by itself.
    pub fn identity(rank: usize) -> Self {
        let labels = vec![(0..rank).map(|i| format!("p{i}")).collect()];
        Resolution {
            complex: Arc::new(BasedComplex::new_unchecked(0, labels, vec![IntMatrix::zeros(0, rank)])),
            augmentation: IntMatrix::identity(rank),
        }
    }
}

/// Replaces every chain module `X_j` of a complex concentrated in degrees
/// `>= 0` by the given resolution `P^j`, gluing with lifted attaching maps.
/// The result has `X̂_n = ⊕_{j+i=n} P^j_i` and comes with a weak equivalence
/// `q: X̂ -> X`.
pub fn projective_replacement(x: &BasedComplex, resolutions: &[Resolution]) -> Result<ProjectiveReplacement> {
    use crate::htpy;
    if x.is_zero() {
        let z = Arc::new(BasedComplex::zero());
        let q = GradedMap::identity(z.clone());
        return Ok(ProjectiveReplacement { complex: z, q, stages: Vec::new(), attaching: Vec::new() });
    }
    if x.lo() < 0 {
        return Err(Error::InvalidArgument("projective replacement needs a complex in degrees >= 0".into()));
    }
    let x = x.widen(0, x.hi());
    let top = x.hi();
    if resolutions.len() != (top + 1) as usize {
        return Err(Error::InvalidArgument(format!(
            "need {} resolutions, got {}",
            top + 1,
            resolutions.len()
        )));
    }
    // augmentations as chain maps P^k -> X_k[0]
    let mut eps = Vec::new();
    for (k, res) in resolutions.iter().enumerate() {
        let p = &res.complex;
        if p.lo() < 0 {
            return Err(Error::InvalidArgument(format!("resolution {k} has negative degrees")));
        }
        let labels = vec![x.labels(k as i32).to_vec()];
        let module = Arc::new(BasedComplex::new_unchecked(0, labels, vec![IntMatrix::zeros(0, x.rank(k as i32))]));
        let p = Arc::new(p.widen(0, p.hi().max(0)));
        let e = GradedMap::from_fn(p.clone(), module, 0, |j| {
            if j == 0 {
                res.augmentation.clone()
            } else {
                IntMatrix::zeros(0, p.rank(j))
            }
        })
        .map_err(|e| Error::InvalidArgument(format!("resolution {k}: {e}")))?;
        e.check_chain_map()
            .map_err(|_| Error::InvalidArgument(format!("resolution {k}: augmentation does not kill d_1")))?;
        htpy::check_weak_equivalence(&e)
            .map_err(|_| Error::InvalidArgument(format!("resolution {k} is not a resolution of X_{k}")))?;
        eps.push(e);
    }
    let mut stages: Vec<(Arc<BasedComplex>, ChainMap)> = Vec::new();
    let mut attaching = Vec::new();
    // stage 0: q^0 = ε_0 into the 0-skeleton
    let sk0 = Arc::new(x.skeleton(0));
    let q0 = eps[0].retarget(eps[0].source().clone(), sk0)?;
    stages.push((q0.source().clone(), q0));
    for k in 1..=top {
        let q_prev = stages.last().unwrap().1.clone();
        let skel_prev = q_prev.target().clone();
        let sk = x.skeleton(k);
        // attaching map d_k: Σ^{k-1} X_k -> X^(k-1)
        let xk = eps[k as usize].target().clone();
        let sxk = Arc::new(xk.suspend(k - 1));
        let dk = GradedMap::from_fn(sxk.clone(), skel_prev.clone(), 0, |j| {
            if j == k - 1 {
                x.diff(k).into_owned()
            } else {
                IntMatrix::zeros(skel_prev.rank(j), sxk.rank(j))
            }
        })?;
        dk.check_chain_map()?;
        let se = eps[k as usize].suspend(k - 1);
        let se = se.retarget(se.source().clone(), sxk.clone())?;
        let inv = htpy::homotopy_inverse(&q_prev)?;
        let ga = dk.compose(&se)?;
        let lift = inv.r.compose(&ga)?;
        let h = inv.h_tgt.compose(&ga)?;
        let square = HomotopySquare::new(lift.clone(), dk.clone(), se, q_prev.clone(), h)?;
        let qk = square.cone_map()?;
        let target = Arc::new(sk.clone());
        // Cone(d_k) is the k-skeleton up to labels.
        let qk = qk.retarget(qk.source().clone(), target)?;
        qk.check_chain_map()?;
        attaching.push(lift);
        stages.push((qk.source().clone(), qk));
    }
    let (complex, q) = stages.last().unwrap().clone();
    let xa = Arc::new(x.clone());
    let q = q.retarget(complex.clone(), xa)?;
    q.check_chain_map()?;
    htpy::check_weak_equivalence(&q)?;
    Ok(ProjectiveReplacement { complex, q, stages, attaching })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::integer_homology;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let data: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        let c = data.first().map(|r| r.len()).unwrap_or(0);
        IntMatrix::from_rows(data.len(), c, &data)
    }

    fn circle3() -> BasedComplex {
        BasedComplex::from_diffs(0, &[3, 3], vec![m(&[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1]])], "e").unwrap()
    }

    fn z_in(deg: i32) -> Arc<BasedComplex> {
        Arc::new(BasedComplex::point(deg))
    }

    fn times(c: i64) -> ChainMap {
        GradedMap::chain_map(z_in(0), z_in(0), vec![m(&[&[c]])]).unwrap()
    }

    #[test]
    fn validation_reports_nonzero_square() {
        let bad = BasedComplex::new_unchecked(
            0,
            vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            vec![IntMatrix::zeros(0, 1), m(&[&[1]]), m(&[&[1]])],
        );
        let report = bad.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].contains("∂∂ ≠ 0"));
        assert!(circle3().is_valid());
        assert!(BasedComplex::zero().is_valid());
    }

    #[test]
    fn suspension_round_trip() {
        let x = circle3();
        assert_eq!(x.suspend(1).suspend(-1), x);
        let s = x.suspend(1);
        assert_eq!((s.rank(1), s.rank(2)), (3, 3));
        assert_eq!(*s.diff(2), x.diff(1).neg());
    }

    #[test]
    fn cone_of_identity_and_multiplication() {
        let c = cone(&times(1)).unwrap();
        assert_eq!(c.complex.ranks(), vec![1, 1]);
        assert_eq!(*c.complex.diff(1), m(&[&[1]]));
        let c3 = cone(&times(3)).unwrap();
        let h0 = integer_homology(&c3.complex, 0);
        assert_eq!(h0.betti, 0);
        assert_eq!(h0.torsion, vec![BigInt::from(3)]);
        assert_eq!(integer_homology(&c3.complex, 1).betti, 0);
        // split sequence identities
        assert!(c3.pi.compose(&c3.iota).unwrap().is_zero());
        let si = c3.sigma.compose(&c3.iota).unwrap();
        assert_eq!(si, GradedMap::identity(c3.iota.source().clone()));
    }

    #[test]
    fn cone_of_zero_is_a_sum() {
        let x = circle3();
        let y = BasedComplex::point(0);
        let zero = GradedMap::zero(Arc::new(x.suspend(-1)), Arc::new(y.clone()), 0);
        let c = cone(&zero).unwrap();
        let s = x.direct_sum(&y);
        assert_eq!(c.complex.ranks(), s.ranks());
        for j in s.degrees() {
            assert_eq!(*c.complex.diff(j), *s.diff(j));
        }
    }

    #[test]
    fn identity_square_gives_identity_cone_map() {
        let f = times(2);
        let id = GradedMap::identity(z_in(0));
        let sq = HomotopySquare::strict(f.clone(), f, id.clone(), id).unwrap();
        let cm = sq.cone_map().unwrap();
        assert_eq!(cm, GradedMap::identity(cm.source().clone()));
    }

    #[test]
    fn truncation_kills_top_homology() {
        let t = circle3().truncate_below(1).unwrap();
        assert!(t.is_valid());
        assert_eq!(integer_homology(&t, 1).betti, 0);
        assert_eq!(integer_homology(&t, 0).betti, 1);
        assert_eq!(t.rank(0), 3);
        assert_eq!(t.rank(1), 3);
        let p = BasedComplex::point(0).truncate_below(0).unwrap();
        assert!((p.lo()..=p.hi()).all(|j| integer_homology(&p, j).is_trivial()));
    }

    #[test]
    fn skeleton_of_circle() {
        let s = circle3().skeleton(0);
        assert_eq!(s.ranks(), vec![3]);
        assert_eq!(integer_homology(&s, 0).betti, 3);
        assert_eq!(circle3().skeleton(1), circle3());
    }

    #[test]
    fn sum_of_circles() {
        let s2 = BasedComplex::from_diffs(0, &[2, 2], vec![m(&[&[-1, 1], &[1, -1]])], "e").unwrap();
        let s = s2.direct_sum(&circle3());
        assert_eq!(s.ranks(), vec![5, 5]);
        assert_eq!(integer_homology(&s, 1).betti, 2);
        assert_eq!(s.direct_sum(&BasedComplex::zero()), s);
    }

    #[test]
    fn json_round_trip() {
        let x = circle3().suspend(2);
        let json = serde_json::to_string(&x.to_json()).unwrap();
        let back: ComplexJson = serde_json::from_str(&json).unwrap();
        assert_eq!(BasedComplex::from_json(&back).unwrap(), x);
    }

    #[test]
    fn trivial_projective_replacement() {
        let x = BasedComplex::from_diffs(0, &[1, 1], vec![m(&[&[2]])], "x").unwrap();
        let res = vec![Resolution::identity(1), Resolution::identity(1)];
        let pr = projective_replacement(&x, &res).unwrap();
        assert_eq!(pr.complex.ranks(), vec![1, 1]);
        assert_eq!(*pr.complex.diff(1), m(&[&[2]]));
        assert_eq!(pr.q.at(0).into_owned(), IntMatrix::identity(1));
        assert_eq!(pr.q.at(1).into_owned(), IntMatrix::identity(1));
    }

    #[test]
    fn projective_replacement_with_a_longer_resolution() {
        // Z in degree 0 resolved by Z --(1,-1)^T--> Z^2 --(1 1)--> Z
        let x = BasedComplex::from_diffs(0, &[1, 1], vec![m(&[&[3]])], "x").unwrap();
        let p = BasedComplex::from_diffs(0, &[2, 1], vec![m(&[&[1], &[-1]])], "p").unwrap();
        let res = vec![
            Resolution { complex: Arc::new(p.clone()), augmentation: m(&[&[1, 1]]) },
            Resolution { complex: Arc::new(p), augmentation: m(&[&[1, 1]]) },
        ];
        let pr = projective_replacement(&x, &res).unwrap();
        assert_eq!(pr.complex.ranks(), vec![2, 3, 1]);
        for j in 0..=2 {
            assert_eq!(integer_homology(&pr.complex, j), integer_homology(&x.widen(0, 2), j));
        }
    }
}
