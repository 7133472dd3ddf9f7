//! Chain complexes over the group rings of `Z^n` and `Z/m`, their coinvariants
//! along finite-index subgroups, induction from subgroups, and the descent of
//! equivariant retracts to certified rebuildings of the coinvariants.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::htpy::{permutation_iso, HomotopyRetract};
use crate::int::parse_decimal;
use crate::matrix::IntMatrix;
use crate::rebuild::{self, check_quality, CertifiedRebuilding, LedgerEntry, Quality, RebuildKind, Status};
use crate::zchain::{BasedComplex, ChainMap, GradedMap};

/// Group elements as coordinate vectors: `Z^n` uses `n` integers, `Z/m` a
/// single residue in `[0, m)`.
pub type GroupElem = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    FreeAbelian { rank: usize },
    FiniteCyclic { order: u64 },
}

impl GroupSpec {
    pub fn free_abelian(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("Z^n needs n >= 1".into()));
        }
        Ok(GroupSpec::FreeAbelian { rank })
    }

    pub fn cyclic(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("Z/m needs m >= 1".into()));
        }
        Ok(GroupSpec::FiniteCyclic { order })
    }

    /// Parses `Z`, `Z^2`, `Z2`, `Z/6`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().replace('ℤ', "Z");
        let bad = || Error::InvalidArgument(format!("unknown group `{s}` (try Z, Z^2, Z/6)"));
        let rest = t.strip_prefix('Z').ok_or_else(bad)?;
        if rest.is_empty() {
            return Self::free_abelian(1);
        }
        if let Some(m) = rest.strip_prefix('/') {
            return Self::cyclic(m.parse().map_err(|_| bad())?);
        }
        let n = rest.strip_prefix('^').unwrap_or(rest);
        Self::free_abelian(n.parse().map_err(|_| bad())?)
    }

    /// Number of coordinates of an element.
    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::FreeAbelian { rank } => *rank,
            GroupSpec::FiniteCyclic { .. } => 1,
        }
    }

    pub fn identity(&self) -> GroupElem {
        vec![0; self.dim()]
    }

    pub fn reduce(&self, g: &mut GroupElem) {
        if let GroupSpec::FiniteCyclic { order } = self {
            g[0] = g[0].rem_euclid(*order as i64);
        }
    }

    pub fn op(&self, a: &[i64], b: &[i64]) -> GroupElem {
        let mut g: GroupElem = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&mut g);
        g
    }

    pub fn inverse(&self, a: &[i64]) -> GroupElem {
        let mut g: GroupElem = a.iter().map(|x| -x).collect();
        self.reduce(&mut g);
        g
    }

    /// The `i`-th standard generator `t_{i+1}`.
    pub fn generator(&self, i: usize) -> GroupElem {
        let mut g = self.identity();
        g[i] = 1;
        self.reduce(&mut g);
        g
    }

    /// Standard generators and their inverses.
    pub fn standard_generators(&self) -> Vec<GroupElem> {
        let mut s = Vec::new();
        for i in 0..self.dim() {
            let g = self.generator(i);
            s.push(self.inverse(&g));
            s.push(g);
        }
        s.sort();
        s.dedup();
        s
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroupSpec::FiniteCyclic { .. })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FreeAbelian { rank: 1 } => write!(f, "Z"),
            GroupSpec::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            GroupSpec::FiniteCyclic { order } => write!(f, "Z/{order}"),
        }
    }
}

/// A finite formal sum of group elements with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<GroupElem, BigInt>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(g: GroupElem, c: impl Into<BigInt>) -> Self {
        let mut e = Self::zero();
        e.add_term(g, c.into());
        e
    }

    pub fn one(group: &GroupSpec) -> Self {
        Self::monomial(group.identity(), 1)
    }

    /// `g - 1`.
    pub fn minus_one(group: &GroupSpec, g: GroupElem) -> Self {
        let mut e = Self::monomial(g, 1);
        e.add_term(group.identity(), -BigInt::one());
        e
    }

    /// `1 + t + ... + t^{m-1}` in `Z[Z/m]`.
    pub fn norm_element(order: u64) -> Self {
        let mut e = Self::zero();
        for k in 0..order {
            e.add_term(vec![k as i64], BigInt::one());
        }
        e
    }

    pub fn add_term(&mut self, g: GroupElem, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElem, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElem> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of the absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        for (g, c) in &other.terms {
            e.add_term(g.clone(), c.clone());
        }
        e
    }

    pub fn neg(&self) -> Self {
        GroupRingElement { terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Self, group: &GroupSpec) -> Self {
        let mut e = Self::zero();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                e.add_term(group.op(g, h), a * b);
            }
        }
        e
    }

    /// Translates every term by `g` (left multiplication by `g`).
    pub fn shift(&self, g: &[i64], group: &GroupSpec) -> Self {
        let mut e = Self::zero();
        for (h, c) in &self.terms {
            e.add_term(group.op(g, h), c.clone());
        }
        e
    }

    fn map_elements(&self, f: impl Fn(&[i64]) -> GroupElem) -> Self {
        let mut e = Self::zero();
        for (g, c) in &self.terms {
            e.add_term(f(g), c.clone());
        }
        e
    }
}

/// A matrix over the group ring, stored by columns; column `k` is the image
/// of the `k`-th basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrix {
    rows: usize,
    columns: Vec<BTreeMap<usize, GroupRingElement>>,
}

impl GroupRingMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GroupRingMatrix { rows, columns: vec![BTreeMap::new(); cols] }
    }

    pub fn identity(group: &GroupSpec, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GroupRingElement::one(group));
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<(usize, usize, GroupRingElement)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, e) in entries {
            let cur = m.get(r, c).add(&e);
            m.set(r, c, cur);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, r: usize, c: usize) -> GroupRingElement {
        self.columns[c].get(&r).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, e: GroupRingElement) {
        assert!(r < self.rows, "row {r} outside {} rows", self.rows);
        if e.is_zero() {
            self.columns[c].remove(&r);
        } else {
            self.columns[c].insert(r, e);
        }
    }

    pub fn column(&self, c: usize) -> &BTreeMap<usize, GroupRingElement> {
        &self.columns[c]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GroupRingElement)> {
        self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, e)| (*r, c, e)))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    /// Max over columns of the summed `ℓ¹` norms of the entries.
    pub fn norm(&self) -> BigInt {
        self.columns
            .iter()
            .map(|col| col.values().map(GroupRingElement::l1_norm).sum::<BigInt>())
            .max()
            .unwrap_or_default()
    }

    pub fn mul(&self, rhs: &GroupRingMatrix, group: &GroupSpec) -> Result<GroupRingMatrix> {
        if self.cols() != rhs.rows {
            return Err(Error::Shape(format!(
                "group ring product {}x{} * {}x{}",
                self.rows,
                self.cols(),
                rhs.rows,
                rhs.cols()
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols());
        for (c, col) in rhs.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, GroupRingElement> = BTreeMap::new();
            for (m, b) in col {
                for (r, a) in &self.columns[*m] {
                    let e = acc.entry(*r).or_default();
                    *e = e.add(&a.mul(b, group));
                }
            }
            acc.retain(|_, e| !e.is_zero());
            out.columns[c] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &GroupRingMatrix) -> Result<GroupRingMatrix> {
        if self.rows != rhs.rows || self.cols() != rhs.cols() {
            return Err(Error::Shape("group ring sum of different shapes".into()));
        }
        let mut out = self.clone();
        for (r, c, e) in rhs.entries() {
            let cur = out.get(r, c).add(e);
            out.set(r, c, cur);
        }
        Ok(out)
    }

    pub fn neg(&self) -> GroupRingMatrix {
        GroupRingMatrix {
            rows: self.rows,
            columns: self.columns.iter().map(|col| col.iter().map(|(r, e)| (*r, e.neg())).collect()).collect(),
        }
    }

    pub fn sub(&self, rhs: &GroupRingMatrix) -> Result<GroupRingMatrix> {
        self.add(&rhs.neg())
    }

    /// Every group element occurring in an entry.
    pub fn support(&self) -> Vec<GroupElem> {
        let mut s: Vec<GroupElem> = self.entries().flat_map(|(_, _, e)| e.support().cloned()).collect();
        s.sort();
        s.dedup();
        s
    }

    /// The matrix of the induced map on `Λ`-coinvariants: the basis element
    /// `(k, f)` goes to `Σ_l Σ_s λ^{kl}(s) (l, t(f s))`.
    pub fn coinvariants(&self, level: &Level) -> IntMatrix {
        let idx = level.index();
        let mut cols = Vec::with_capacity(self.cols() * idx);
        for col in &self.columns {
            for f in 0..idx {
                let rep = level.representative(f);
                let mut entries = Vec::new();
                for (l, e) in col {
                    for (s, c) in e.terms() {
                        let g: GroupElem = rep.iter().zip(s).map(|(a, b)| a + b).collect();
                        entries.push((l * idx + level.coset(&g), c.clone()));
                    }
                }
                cols.push(entries);
            }
        }
        IntMatrix::from_columns(self.rows * idx, cols)
    }

    /// `[[a, b], [c, d]]`.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let mut out = Self::zeros(a.rows + c.rows, a.cols() + b.cols());
        for (m, dr, dc) in [(a, 0, 0), (b, 0, a.cols()), (c, a.rows, 0), (d, a.rows, a.cols())] {
            for (r, col, e) in m.entries() {
                out.set(r + dr, col + dc, e.clone());
            }
        }
        out
    }

    fn map_elements(&self, f: &impl Fn(&[i64]) -> GroupElem) -> GroupRingMatrix {
        GroupRingMatrix {
            rows: self.rows,
            columns: self.columns.iter().map(|col| col.iter().map(|(r, e)| (*r, e.map_elements(f))).collect()).collect(),
        }
    }
}

/// A finite-index subgroup `Λ = m_1 Z × ... × m_n Z` of `Z^n`, or `qZ/mZ`
/// in `Z/m`. Cosets are indexed by mixed-radix tuples in `Π [0, m_i)`,
/// first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Level {
    pub moduli: Vec<u64>,
}

impl Level {
    pub fn new(group: &GroupSpec, moduli: Vec<u64>) -> Result<Self> {
        if moduli.len() != group.dim() || moduli.contains(&0) {
            return Err(Error::InvalidArgument(format!("subgroup of {group} needs {} positive moduli", group.dim())));
        }
        if let GroupSpec::FiniteCyclic { order } = group {
            if order % moduli[0] != 0 {
                return Err(Error::InvalidArgument(format!("index {} does not divide {order}", moduli[0])));
            }
        }
        Ok(Level { moduli })
    }

    /// `(dZ)^n`, or the subgroup of index `d` in `Z/m`.
    pub fn uniform(group: &GroupSpec, d: u64) -> Result<Self> {
        Self::new(group, vec![d; group.dim()])
    }

    /// `[Γ : Λ]`.
    pub fn index(&self) -> usize {
        self.moduli.iter().product::<u64>() as usize
    }

    pub fn coset(&self, g: &[i64]) -> usize {
        let mut idx = 0usize;
        for (x, &m) in g.iter().zip(&self.moduli) {
            idx = idx * m as usize + x.rem_euclid(m as i64) as usize;
        }
        idx
    }

    pub fn representative(&self, mut idx: usize) -> GroupElem {
        let mut g = vec![0; self.moduli.len()];
        for (slot, &m) in g.iter_mut().zip(&self.moduli).rev() {
            *slot = (idx % m as usize) as i64;
            idx /= m as usize;
        }
        g
    }

    pub fn contains(&self, other: &Level) -> bool {
        self.moduli.iter().zip(&other.moduli).all(|(a, b)| b % a == 0)
    }

    pub fn label(&self, idx: usize) -> String {
        let r = self.representative(idx);
        r.iter().map(i64::to_string).collect::<Vec<_>>().join(".")
    }
}

/// A finite prefix of a residual chain `Γ = Λ_0 ⊇ Λ_1 ⊇ ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualChain {
    pub group: GroupSpec,
    pub levels: Vec<Level>,
}

impl ResidualChain {
    /// For `Z^n` the moduli must divide each other and increase strictly; for
    /// `Z/m` they must divide each other and end at the trivial subgroup.
    pub fn new(group: GroupSpec, levels: Vec<Level>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument("empty residual chain".into()));
        }
        for w in levels.windows(2) {
            if !w[0].contains(&w[1]) {
                return Err(Error::InvalidArgument(format!("{:?} does not contain {:?}", w[0].moduli, w[1].moduli)));
            }
            if !group.is_finite() && w[0].index() >= w[1].index() {
                return Err(Error::InvalidArgument("indices must increase strictly along a chain in Z^n".into()));
            }
        }
        if let GroupSpec::FiniteCyclic { order } = group {
            if levels.last().unwrap().index() as u64 != order {
                return Err(Error::InvalidArgument("a chain in Z/m must end at the trivial subgroup".into()));
            }
        }
        Ok(ResidualChain { group, levels })
    }

    /// Uniform moduli, e.g. `[1, 2, 4, 8]`.
    pub fn from_moduli(group: GroupSpec, moduli: &[u64]) -> Result<Self> {
        let levels = moduli.iter().map(|&m| Level::uniform(&group, m)).collect::<Result<Vec<_>>>()?;
        Self::new(group, levels)
    }

    /// Moduli `2^0, ..., 2^top`.
    pub fn powers_of_two(group: GroupSpec, top: u32) -> Result<Self> {
        let moduli: Vec<u64> = (0..=top).map(|i| 1u64 << i).collect();
        Self::from_moduli(group, &moduli)
    }
}

/// A free complex over `ZΓ` in degrees `lo..=hi`; `diffs[k]` is `d_{lo+k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantComplex {
    pub group: GroupSpec,
    lo: i32,
    labels: Vec<Vec<String>>,
    diffs: Vec<GroupRingMatrix>,
    /// Set when the complex is a truncation of an infinite resolution.
    pub truncated_at: Option<i32>,
}

impl EquivariantComplex {
    pub fn new(group: GroupSpec, lo: i32, labels: Vec<Vec<String>>, diffs: Vec<GroupRingMatrix>) -> Result<Self> {
        let x = EquivariantComplex { group, lo, labels, diffs, truncated_at: None };
        x.validate()?;
        Ok(x)
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.labels.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    /// Rank over `ZΓ`.
    pub fn rank(&self, j: i32) -> usize {
        self.slot(j).map_or(0, |k| self.labels[k].len())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, j: i32) -> &[String] {
        self.slot(j).map_or(&[], |k| &self.labels[k])
    }

    fn slot(&self, j: i32) -> Option<usize> {
        (j >= self.lo && j <= self.hi()).then(|| (j - self.lo) as usize)
    }

    pub fn diff(&self, j: i32) -> GroupRingMatrix {
        match self.slot(j) {
            Some(k) if j > self.lo => self.diffs[k].clone(),
            _ => GroupRingMatrix::zeros(self.rank(j - 1), self.rank(j)),
        }
    }

    pub fn diff_norm(&self, j: i32) -> BigInt {
        self.diff(j).norm()
    }

    /// Shapes and `dd = 0`, computed exactly in the group ring.
    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.diffs.len() {
            return Err(Error::InvalidComplex("one differential per degree".into()));
        }
        for j in self.degrees() {
            let d = self.diff(j);
            if d.rows() != self.rank(j - 1) || d.cols() != self.rank(j) {
                return Err(Error::InvalidComplex(format!("d_{j} has the wrong shape")));
            }
            for (_, _, e) in d.entries() {
                if e.support().any(|g| g.len() != self.group.dim()) {
                    return Err(Error::InvalidComplex(format!("d_{j} has an element of the wrong dimension")));
                }
            }
            if j > self.lo && !self.diff(j - 1).mul(&d, &self.group)?.is_zero() {
                return Err(Error::InvalidComplex(format!("∂∂ ≠ 0 at degree {j}")));
            }
        }
        Ok(())
    }

    /// `Z ⊗_{ZΛ} X` with basis `(k, f)` ordered `k`-major, then by coset.
    pub fn coinvariants(&self, level: &Level) -> BasedComplex {
        let idx = level.index();
        let mut labels = Vec::new();
        let mut diffs = Vec::new();
        for j in self.degrees() {
            let mut l = Vec::with_capacity(self.rank(j) * idx);
            for name in self.labels(j) {
                for f in 0..idx {
                    l.push(format!("{name}@{}", level.label(f)));
                }
            }
            labels.push(l);
            diffs.push(if j == self.lo {
                IntMatrix::zeros(0, self.rank(j) * idx)
            } else {
                self.diff(j).coinvariants(level)
            });
        }
        BasedComplex::new_unchecked(self.lo, labels, diffs)
    }

    /// Every group element in the support of some differential.
    pub fn support(&self) -> Vec<GroupElem> {
        let mut s: Vec<GroupElem> = self.degrees().flat_map(|j| self.diff(j).support()).collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn to_json(&self) -> EquivariantJson {
        EquivariantJson {
            group: self.group.clone(),
            truncated_at: self.truncated_at,
            degrees: self
                .degrees()
                .map(|j| EquivariantDegreeJson {
                    degree: j,
                    rank: self.rank(j),
                    basis: self.labels(j).to_vec(),
                    differential: matrix_to_json(&self.diff(j), &self.group),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &EquivariantJson) -> Result<Self> {
        let mut degs = json.degrees.clone();
        degs.sort_by_key(|d| d.degree);
        if degs.is_empty() {
            return Err(Error::InvalidComplex("no degrees".into()));
        }
        let lo = degs[0].degree;
        let mut labels = Vec::new();
        let mut diffs = Vec::new();
        for (k, d) in degs.iter().enumerate() {
            if d.degree != lo + k as i32 {
                return Err(Error::InvalidComplex("degrees must be consecutive".into()));
            }
            if d.basis.len() != d.rank {
                return Err(Error::InvalidComplex(format!("degree {}: basis length differs from rank", d.degree)));
            }
            let rows = if k == 0 { 0 } else { degs[k - 1].rank };
            diffs.push(matrix_from_json(&d.differential, rows, d.rank, &json.group)?);
            labels.push(d.basis.clone());
        }
        let mut x = EquivariantComplex::new(json.group.clone(), lo, labels, diffs)?;
        x.truncated_at = json.truncated_at;
        Ok(x)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivariantJson {
    pub group: GroupSpec,
    #[serde(default)]
    pub truncated_at: Option<i32>,
    pub degrees: Vec<EquivariantDegreeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivariantDegreeJson {
    pub degree: i32,
    pub rank: usize,
    pub basis: Vec<String>,
    pub differential: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryJson {
    pub row: usize,
    pub col: usize,
    pub value: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub element: ElementJson,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Residue(i64),
    Vector(Vec<i64>),
}

fn matrix_to_json(m: &GroupRingMatrix, group: &GroupSpec) -> Vec<EntryJson> {
    m.entries()
        .map(|(row, col, e)| EntryJson {
            row,
            col,
            value: e
                .terms()
                .map(|(g, c)| TermJson {
                    element: if group.is_finite() { ElementJson::Residue(g[0]) } else { ElementJson::Vector(g.clone()) },
                    coeff: c.to_string(),
                })
                .collect(),
        })
        .collect()
}

fn matrix_from_json(entries: &[EntryJson], rows: usize, cols: usize, group: &GroupSpec) -> Result<GroupRingMatrix> {
    let mut out = Vec::new();
    for e in entries {
        if e.row >= rows || e.col >= cols {
            return Err(Error::InvalidComplex(format!("entry ({}, {}) outside {rows}x{cols}", e.row, e.col)));
        }
        let mut v = GroupRingElement::zero();
        for t in &e.value {
            let mut g = match &t.element {
                ElementJson::Residue(r) => vec![*r],
                ElementJson::Vector(g) => g.clone(),
            };
            if g.len() != group.dim() {
                return Err(Error::InvalidComplex(format!("element {g:?} is not in {group}")));
            }
            group.reduce(&mut g);
            let c = parse_decimal(&t.coeff)
                .ok_or_else(|| Error::InvalidComplex(format!("bad coefficient `{}`", t.coeff)))?;
            v.add_term(g, c);
        }
        out.push((e.row, e.col, v));
    }
    Ok(GroupRingMatrix::from_entries(rows, cols, out))
}

/// Subsets of `0..n` of size `j` as sorted index lists, in lexicographic order.
pub fn koszul_basis(n: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < left {
                break;
            }
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, j, &mut Vec::new(), &mut out);
    out
}

pub fn koszul_label(subset: &[usize]) -> String {
    let inner: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
    format!("e[{}]", inner.join(","))
}

/// The Koszul resolution of `Z` over `Z[Z^n]`:
/// `d(e_{i_1} ∧ ... ∧ e_{i_j}) = Σ_k (-1)^{k+1} (t_{i_k} - 1) e_{... î_k ...}`.
pub fn koszul_resolution(n: usize) -> Result<EquivariantComplex> {
    let group = GroupSpec::free_abelian(n)?;
    let bases: Vec<Vec<Vec<usize>>> = (0..=n).map(|j| koszul_basis(n, j)).collect();
    let mut diffs = vec![GroupRingMatrix::zeros(0, 1)];
    for j in 1..=n {
        let rows = &bases[j - 1];
        let pos: BTreeMap<&Vec<usize>, usize> = rows.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut entries = Vec::new();
        for (c, subset) in bases[j].iter().enumerate() {
            for (k, &i) in subset.iter().enumerate() {
                let mut face = subset.clone();
                face.remove(k);
                let mut e = GroupRingElement::minus_one(&group, group.generator(i));
                if k % 2 == 1 {
                    e = e.neg();
                }
                entries.push((pos[&face], c, e));
            }
        }
        diffs.push(GroupRingMatrix::from_entries(rows.len(), bases[j].len(), entries));
    }
    let labels = bases.iter().map(|b| b.iter().map(|s| koszul_label(s)).collect()).collect();
    EquivariantComplex::new(group, 0, labels, diffs)
}

/// The 2-periodic resolution of `Z` over `Z[Z/m]` with differentials
/// `t - 1, N, t - 1, N, ...`, truncated at degree `top`.
pub fn cyclic_resolution(order: u64, top: i32) -> Result<EquivariantComplex> {
    let group = GroupSpec::cyclic(order)?;
    if top < 0 {
        return Err(Error::InvalidArgument("truncation degree must be >= 0".into()));
    }
    let mut diffs = vec![GroupRingMatrix::zeros(0, 1)];
    for j in 1..=top {
        let e = if j % 2 == 1 {
            GroupRingElement::minus_one(&group, group.generator(0))
        } else {
            GroupRingElement::norm_element(order)
        };
        diffs.push(GroupRingMatrix::from_entries(1, 1, vec![(0, 0, e)]));
    }
    let labels = (0..=top).map(|j| vec![format!("p{j}")]).collect();
    let mut x = EquivariantComplex::new(group, 0, labels, diffs)?;
    x.truncated_at = Some(top);
    Ok(x)
}

/// The standard resolution of `Z` over `ZΓ`: Koszul for `Z^n` (where `top`
/// is ignored), the periodic one truncated at `top` for `Z/m`.
pub fn standard_resolution(group: &GroupSpec, top: i32) -> Result<EquivariantComplex> {
    match group {
        GroupSpec::FreeAbelian { rank } => koszul_resolution(*rank),
        GroupSpec::FiniteCyclic { order } => cyclic_resolution(*order, top),
    }
}

/// `‖f_Λ‖ <= ‖f‖` for the coinvariant matrix of a group ring matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCheck {
    pub coinvariant: BigInt,
    pub group_ring: BigInt,
    pub holds: bool,
}

pub fn coinvariant_norm_check(f: &GroupRingMatrix, level: &Level) -> NormCheck {
    let coinvariant = f.coinvariants(level).l1_norm();
    let group_ring = f.norm();
    let holds = coinvariant <= group_ring;
    NormCheck { coinvariant, group_ring, holds }
}

/// How a subgroup `Δ` sits inside the ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Embedding {
    /// `Z^k -> Z^n` onto the listed coordinates.
    Coordinates(Vec<usize>),
    /// `Z/m' -> Z/m` with generator going to `t^{m/m'}`.
    CyclicSubgroup,
}

fn embed_fn(sub: &GroupSpec, ambient: &GroupSpec, emb: &Embedding) -> Result<impl Fn(&[i64]) -> GroupElem> {
    let (coords, stride, n) = match (sub, ambient, emb) {
        (GroupSpec::FreeAbelian { rank: k }, GroupSpec::FreeAbelian { rank: n }, Embedding::Coordinates(c)) => {
            let mut sorted = c.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if c.len() != *k || sorted.len() != *k || c.iter().any(|&i| i >= *n) {
                return Err(Error::Unsupported(format!("coordinates {c:?} do not embed Z^{k} in Z^{n}")));
            }
            (c.clone(), 1, *n)
        }
        (GroupSpec::FiniteCyclic { order: a }, GroupSpec::FiniteCyclic { order: m }, Embedding::CyclicSubgroup) => {
            if m % a != 0 {
                return Err(Error::Unsupported(format!("Z/{a} is not a subgroup of Z/{m}")));
            }
            (vec![0], (m / a) as i64, 1)
        }
        _ => return Err(Error::Unsupported(format!("cannot embed {sub} in {ambient} via {emb:?}"))),
    };
    let ambient = ambient.clone();
    Ok(move |g: &[i64]| {
        let mut out = vec![0; n];
        for (x, &c) in g.iter().zip(&coords) {
            out[c] = x * stride;
        }
        ambient.reduce(&mut out);
        out
    })
}

/// `ind_Δ^Γ X = ZΓ ⊗_{ZΔ} X`: same ranks and labels, entries read in `Γ`.
pub fn induce(x: &EquivariantComplex, ambient: &GroupSpec, emb: &Embedding) -> Result<EquivariantComplex> {
    let f = embed_fn(&x.group, ambient, emb)?;
    let diffs = x.degrees().map(|j| x.diff(j).map_elements(&f)).collect();
    let mut out = EquivariantComplex::new(ambient.clone(), x.lo, x.labels.clone(), diffs)?;
    out.truncated_at = x.truncated_at;
    Ok(out)
}

/// `(ind X)_Λ ≅ ⊕ X_{Λ∩Δ}` over the cosets of `ΔΛ`, as an explicit basis
/// bijection that is checked to carry one differential onto the other.
#[derive(Clone, Debug)]
pub struct InductionDecomposition {
    pub induced: Arc<BasedComplex>,
    pub summand: Arc<BasedComplex>,
    pub copies: usize,
    pub sum: Arc<BasedComplex>,
    /// `(ind X)_Λ -> ⊕ X_{Λ∩Δ}` and its inverse.
    pub iso: ChainMap,
    pub iso_inv: ChainMap,
}

/// The subgroup `Λ ∩ Δ` of `Δ = Z^k` (coordinates `coords` of `Z^n`).
pub fn restrict_level(level: &Level, coords: &[usize]) -> Level {
    Level { moduli: coords.iter().map(|&c| level.moduli[c]).collect() }
}

pub fn induction_decomposition(x: &EquivariantComplex, ambient: &GroupSpec, coords: &[usize], level: &Level) -> Result<InductionDecomposition> {
    if ambient.is_finite() {
        return Err(Error::Unsupported("the coinvariant decomposition is implemented for Z^n".into()));
    }
    let ind = induce(x, ambient, &Embedding::Coordinates(coords.to_vec()))?;
    let induced = Arc::new(ind.coinvariants(level));
    let sub_level = restrict_level(level, coords);
    let summand = Arc::new(x.coinvariants(&sub_level));
    let others: Vec<usize> = (0..ambient.dim()).filter(|c| !coords.contains(c)).collect();
    let other_level = Level { moduli: others.iter().map(|&c| level.moduli[c]).collect() };
    let copies = other_level.index();
    // block-diagonal sum of the copies, copy-major
    let mut labels = Vec::new();
    let mut diffs = Vec::new();
    for j in x.degrees() {
        labels.push(
            (0..copies)
                .flat_map(|c| summand.labels(j).iter().map(move |l| format!("{}#{l}", c)))
                .collect::<Vec<_>>(),
        );
        let d = summand.diff(j).into_owned();
        let mut big = IntMatrix::zeros(0, 0);
        for _ in 0..copies {
            big = big.block_diag(&d);
        }
        diffs.push(big);
    }
    let sum = Arc::new(BasedComplex::new_unchecked(x.lo(), labels, diffs));
    let idx = level.index();
    let sub_idx = sub_level.index();
    let perms: Vec<Vec<usize>> = x
        .degrees()
        .map(|j| {
            let mut p = vec![0; x.rank(j) * idx];
            for k in 0..x.rank(j) {
                for f in 0..idx {
                    let g = level.representative(f);
                    let mine: Vec<i64> = coords.iter().map(|&c| g[c]).collect();
                    let rest: Vec<i64> = others.iter().map(|&c| g[c]).collect();
                    let copy = other_level.coset(&rest);
                    p[k * idx + f] = copy * x.rank(j) * sub_idx + k * sub_idx + sub_level.coset(&mine);
                }
            }
            p
        })
        .collect();
    let (iso, iso_inv) = permutation_iso(induced.clone(), sum.clone(), &perms)?;
    Ok(InductionDecomposition { induced, summand, copies, sum, iso, iso_inv })
}

/// A graded map of free `ZΓ`-complexes, indexed by source degree.
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    pub source: Arc<EquivariantComplex>,
    pub target: Arc<EquivariantComplex>,
    pub degree: i32,
    maps: Vec<GroupRingMatrix>,
}

impl EquivariantMap {
    pub fn new(
        source: Arc<EquivariantComplex>,
        target: Arc<EquivariantComplex>,
        degree: i32,
        maps: Vec<GroupRingMatrix>,
    ) -> Result<Self> {
        if maps.len() != source.labels.len() {
            return Err(Error::Shape("one component per source degree".into()));
        }
        for (k, m) in maps.iter().enumerate() {
            let j = source.lo + k as i32;
            if m.rows() != target.rank(j + degree) || m.cols() != source.rank(j) {
                return Err(Error::Shape(format!("component in degree {j} has the wrong shape")));
            }
        }
        Ok(EquivariantMap { source, target, degree, maps })
    }

    pub fn identity(x: Arc<EquivariantComplex>) -> Self {
        let maps = x.degrees().map(|j| GroupRingMatrix::identity(&x.group, x.rank(j))).collect();
        EquivariantMap { source: x.clone(), target: x, degree: 0, maps }
    }

    pub fn zero(source: Arc<EquivariantComplex>, target: Arc<EquivariantComplex>, degree: i32) -> Self {
        let maps = source.degrees().map(|j| GroupRingMatrix::zeros(target.rank(j + degree), source.rank(j))).collect();
        EquivariantMap { source, target, degree, maps }
    }

    pub fn at(&self, j: i32) -> GroupRingMatrix {
        match self.source.slot(j) {
            Some(k) => self.maps[k].clone(),
            None => GroupRingMatrix::zeros(self.target.rank(j + self.degree), self.source.rank(j)),
        }
    }

    pub fn norm(&self, j: i32) -> BigInt {
        self.at(j).norm()
    }

    pub fn compose(&self, other: &EquivariantMap) -> Result<EquivariantMap> {
        let g = &self.source.group;
        let maps = other
            .source
            .degrees()
            .map(|j| self.at(j + other.degree).mul(&other.at(j), g))
            .collect::<Result<Vec<_>>>()?;
        EquivariantMap::new(other.source.clone(), self.target.clone(), self.degree + other.degree, maps)
    }

    /// `∂F - (-1)^deg F∂`, per source degree.
    fn boundary_at(&self, j: i32) -> Result<GroupRingMatrix> {
        let g = &self.source.group;
        let a = self.target.diff(j + self.degree).mul(&self.at(j), g)?;
        let b = self.at(j - 1).mul(&self.source.diff(j), g)?;
        if self.degree % 2 == 0 {
            a.sub(&b)
        } else {
            a.add(&b)
        }
    }

    pub fn check_chain_map(&self) -> Result<()> {
        for j in self.source.degrees() {
            if !self.boundary_at(j)?.is_zero() {
                return Err(Error::NotChainMap { degree: j, detail: "over the group ring".into() });
            }
        }
        Ok(())
    }

    /// `∂H + H∂ = f - g` over the group ring.
    pub fn check_homotopy(&self, f: &EquivariantMap, g: &EquivariantMap, what: &str) -> Result<()> {
        for j in self.source.degrees() {
            if self.boundary_at(j)? != f.at(j).sub(&g.at(j))? {
                return Err(Error::HomotopyIdentity { degree: j, what: what.to_string() });
            }
        }
        Ok(())
    }

    /// The induced map on `Λ`-coinvariants.
    pub fn coinvariants(&self, level: &Level, source: Arc<BasedComplex>, target: Arc<BasedComplex>) -> Result<GradedMap> {
        GradedMap::from_fn(source, target, self.degree, |j| self.at(j).coinvariants(level))
    }
}

/// `Cone(f)_j = X_{j-1} ⊕ Y_j` with `d(x, y) = (-dx, dy + f x)` over `ZΓ`,
/// listing `X_{j-1}` first as in the integral cone.
pub fn equivariant_cone(f: &EquivariantMap) -> Result<EquivariantComplex> {
    f.check_chain_map()?;
    let (x, y) = (&f.source, &f.target);
    let lo = (x.lo() + 1).min(y.lo());
    let hi = (x.hi() + 1).max(y.hi());
    let mut labels = Vec::new();
    let mut diffs = Vec::new();
    for j in lo..=hi {
        let mut l: Vec<String> = x.labels(j - 1).iter().map(|s| format!("cx:{s}")).collect();
        l.extend(y.labels(j).iter().map(|s| format!("cy:{s}")));
        labels.push(l);
        diffs.push(if j == lo {
            GroupRingMatrix::zeros(0, x.rank(j - 1) + y.rank(j))
        } else {
            GroupRingMatrix::block2(
                &x.diff(j - 1).neg(),
                &GroupRingMatrix::zeros(x.rank(j - 2), y.rank(j)),
                &f.at(j - 1),
                &y.diff(j),
            )
        });
    }
    EquivariantComplex::new(x.group.clone(), lo, labels, diffs)
}

/// An equivariant homotopy retract `(X, X', ξ, ξ', Ξ)` over `ZΓ`.
#[derive(Clone, Debug)]
pub struct EquivariantRetract {
    pub xi: EquivariantMap,
    pub xip: EquivariantMap,
    pub big_xi: EquivariantMap,
}

impl EquivariantRetract {
    pub fn new(xi: EquivariantMap, xip: EquivariantMap, big_xi: EquivariantMap) -> Result<Self> {
        let r = EquivariantRetract { xi, xip, big_xi };
        r.verify()?;
        Ok(r)
    }

    pub fn identity(x: Arc<EquivariantComplex>) -> Self {
        EquivariantRetract {
            xi: EquivariantMap::identity(x.clone()),
            xip: EquivariantMap::identity(x.clone()),
            big_xi: EquivariantMap::zero(x.clone(), x, 1),
        }
    }

    pub fn x(&self) -> &Arc<EquivariantComplex> {
        &self.xi.source
    }

    pub fn xp(&self) -> &Arc<EquivariantComplex> {
        &self.xi.target
    }

    pub fn verify(&self) -> Result<()> {
        self.xi.check_chain_map()?;
        self.xip.check_chain_map()?;
        let id = EquivariantMap::identity(self.x().clone());
        let back = self.xip.compose(&self.xi)?;
        self.big_xi.check_homotopy(&id, &back, "Ξ: id ≃ ξ'ξ over ZΓ")
    }

    /// The ledger over `ZΓ`: ranks over the group ring and group ring norms.
    pub fn ledger(&self, n: i32, quality: &Quality, kind: RebuildKind) -> Vec<LedgerEntry> {
        let (x, xp) = (self.x(), self.xp());
        let lo = x.lo().min(xp.lo());
        let mut out = Vec::new();
        for j in lo..=n {
            out.push(rebuild::rank_entry(j, xp.rank(j), x.rank(j), quality));
        }
        if kind >= RebuildKind::Weak {
            for j in lo..=n {
                out.push(rebuild::norm_entry(j, "d'", &xp.diff_norm(j), quality));
                out.push(rebuild::norm_entry(j, "ξ", &self.xi.norm(j), quality));
            }
        }
        if kind == RebuildKind::Full {
            for j in lo..=n {
                out.push(rebuild::norm_entry(j, "ξ'", &self.xip.norm(j), quality));
                out.push(rebuild::norm_entry(j, "Ξ", &self.big_xi.norm(j), quality));
            }
        }
        out
    }

    /// The retract of `Λ`-coinvariants.
    pub fn coinvariants(&self, level: &Level) -> Result<HomotopyRetract> {
        let x = Arc::new(self.x().coinvariants(level));
        let xp = Arc::new(self.xp().coinvariants(level));
        let xi = self.xi.coinvariants(level, x.clone(), xp.clone())?;
        let xip = self.xip.coinvariants(level, xp, x.clone())?;
        let big = self.big_xi.coinvariants(level, x.clone(), x)?;
        HomotopyRetract::new(xi, xip, big)
    }
}

/// Output of [`descend_retract`].
#[derive(Clone, Debug)]
pub struct Descent {
    pub certificate: CertifiedRebuilding,
    pub group_ledger: Vec<LedgerEntry>,
    /// `(degree, map, check)` for every component in degrees `<= n`.
    pub norm_checks: Vec<(i32, String, NormCheck)>,
}

/// Descends an equivariant retract whose group-ring ledger holds at
/// `(T, κ)` to a certified rebuilding of the `Λ`-coinvariants.
pub fn descend_retract(r: &EquivariantRetract, level: &Level, n: i32, quality: &Quality, kind: RebuildKind) -> Result<Descent> {
    r.verify()?;
    let group_ledger = r.ledger(n, quality, kind);
    if let Some(e) = group_ledger.iter().find(|e| e.status != Status::Pass) {
        let (degree, inequality, lhs, rhs) = (e.degree, format!("{} over ZΓ", e.inequality), e.lhs.clone(), e.rhs.clone());
        return Err(if e.status == Status::Fail {
            Error::QualityViolation { degree, inequality, lhs, rhs }
        } else {
            Error::Indeterminate { degree, inequality, lhs, rhs }
        });
    }
    let mut norm_checks = Vec::new();
    for j in r.x().lo().min(r.xp().lo())..=n {
        let maps: [(&str, GroupRingMatrix); 4] = [
            ("d'", r.xp().diff(j)),
            ("ξ", r.xi.at(j)),
            ("ξ'", r.xip.at(j)),
            ("Ξ", r.big_xi.at(j)),
        ];
        for (name, m) in maps {
            let c = coinvariant_norm_check(&m, level);
            if !c.holds {
                return Err(Error::QualityViolation {
                    degree: j,
                    inequality: format!("||{name}_Λ|| <= ||{name}||"),
                    lhs: c.coinvariant.to_string(),
                    rhs: c.group_ring.to_string(),
                });
            }
            norm_checks.push((j, name.to_string(), c));
        }
    }
    let down = r.coinvariants(level)?;
    let certificate = check_quality(&down, n, quality, kind)?;
    Ok(Descent { certificate, group_ledger, norm_checks })
}

/// `Z[Z]`-complex of ranks `(d, d)` obtained by restricting the Koszul
/// complex of `Z` to `dZ` (generator `u = t^d`): `d(e_i) = v_{i+1} - v_i`
/// for `i < d - 1` and `d(e_{d-1}) = u v_0 - v_{d-1}`.
pub fn restricted_line(d: usize) -> Result<EquivariantComplex> {
    if d == 0 {
        return Err(Error::InvalidArgument("d >= 1".into()));
    }
    let g = GroupSpec::free_abelian(1)?;
    let mut entries = Vec::new();
    for i in 0..d {
        let (next, shift) = if i + 1 < d { (i + 1, 0) } else { (0, 1) };
        entries.push((next, i, GroupRingElement::monomial(vec![shift], 1)));
        entries.push((i, i, GroupRingElement::monomial(vec![0], -1)));
    }
    let d1 = GroupRingMatrix::from_entries(d, d, entries);
    let labels = vec![(0..d).map(|i| format!("v{i}")).collect(), (0..d).map(|i| format!("e{i}")).collect()];
    EquivariantComplex::new(g, 0, labels, vec![GroupRingMatrix::zeros(0, d), d1])
}

/// The coarse circle retract written equivariantly over `Z[dZ]`: it collapses
/// [`restricted_line`] onto the Koszul complex of `Z`. Its coinvariants at
/// the index-`m` subgroup give the retract of `S^[0,dm]` onto `S^[0,m]`.
pub fn equivariant_coarse_circle(d: usize) -> Result<EquivariantRetract> {
    let x = Arc::new(restricted_line(d)?);
    let xp = Arc::new(koszul_resolution(1)?);
    let mono = |e: i64, c: i64| GroupRingElement::monomial(vec![e], c);
    let xi0 = GroupRingMatrix::from_entries(1, d, (0..d).map(|i| (0, i, mono(i64::from(i > 0), 1))).collect());
    let xi1 = GroupRingMatrix::from_entries(1, d, vec![(0, 0, mono(0, 1))]);
    let xip0 = GroupRingMatrix::from_entries(d, 1, vec![(0, 0, mono(0, 1))]);
    let xip1 = GroupRingMatrix::from_entries(d, 1, (0..d).map(|i| (i, 0, mono(0, 1))).collect());
    let mut h = Vec::new();
    for i in 1..d {
        for k in i..d {
            h.push((k, i, mono(0, -1)));
        }
    }
    let h0 = GroupRingMatrix::from_entries(d, d, h);
    let xi = EquivariantMap::new(x.clone(), xp.clone(), 0, vec![xi0, xi1])?;
    let xip = EquivariantMap::new(xp, x.clone(), 0, vec![xip0, xip1])?;
    let big = EquivariantMap::new(x.clone(), x.clone(), 1, vec![h0, GroupRingMatrix::zeros(0, d)])?;
    EquivariantRetract::new(xi, xip, big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::integer_homology;
    use crate::rebuild::{circle_complex, coarse_circle_retract, evaluate_quality};

    #[test]
    fn group_parsing() {
        assert_eq!(GroupSpec::parse("Z").unwrap(), GroupSpec::FreeAbelian { rank: 1 });
        assert_eq!(GroupSpec::parse("Z^2").unwrap(), GroupSpec::FreeAbelian { rank: 2 });
        assert_eq!(GroupSpec::parse("Z/6").unwrap(), GroupSpec::FiniteCyclic { order: 6 });
        assert!(GroupSpec::parse("Q").is_err());
        assert_eq!(GroupSpec::parse("Z/6").unwrap().to_string(), "Z/6");
    }

    #[test]
    fn koszul_shapes_and_norms() {
        let k1 = koszul_resolution(1).unwrap();
        assert_eq!(k1.ranks(), vec![1, 1]);
        let t = GroupSpec::free_abelian(1).unwrap();
        assert_eq!(k1.diff(1).get(0, 0), GroupRingElement::minus_one(&t, vec![1]));
        let k2 = koszul_resolution(2).unwrap();
        assert_eq!(k2.ranks(), vec![1, 2, 1]);
        assert_eq!(k2.diff_norm(1), BigInt::from(2));
        assert_eq!(k2.diff_norm(2), BigInt::from(4));
        let k3 = koszul_resolution(3).unwrap();
        assert_eq!(k3.ranks(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn cyclic_resolution_norms() {
        let r = cyclic_resolution(3, 4).unwrap();
        let norms: Vec<BigInt> = (1..=4).map(|j| r.diff_norm(j)).collect();
        assert_eq!(norms, [2, 3, 2, 3].map(BigInt::from).to_vec());
        assert_eq!(r.truncated_at, Some(4));
    }

    #[test]
    fn koszul_one_gives_circles() {
        for d in [1, 2, 3, 7] {
            let k = koszul_resolution(1).unwrap();
            let g = GroupSpec::free_abelian(1).unwrap();
            let c = k.coinvariants(&Level::uniform(&g, d).unwrap());
            let s = circle_complex(d as usize).unwrap();
            assert_eq!(c.diff(1), s.diff(1));
        }
    }

    #[test]
    fn torus_homology() {
        let k = koszul_resolution(2).unwrap();
        for d in [1, 2, 5] {
            let c = k.coinvariants(&Level::uniform(&k.group, d).unwrap());
            let b: Vec<usize> = (0..=2).map(|j| integer_homology(&c, j).betti).collect();
            assert_eq!(b, vec![1, 2, 1]);
            assert!((0..=2).all(|j| integer_homology(&c, j).torsion.is_empty()));
            assert_eq!(c.ranks(), vec![(d * d) as usize, 2 * (d * d) as usize, (d * d) as usize]);
        }
    }

    #[test]
    fn cyclic_coinvariants() {
        let r = cyclic_resolution(6, 4).unwrap();
        let top = Level::uniform(&r.group, 1).unwrap();
        let c = r.coinvariants(&top);
        assert_eq!(integer_homology(&c, 1).torsion, vec![BigInt::from(6)]);
        assert_eq!(integer_homology(&c, 3).torsion, vec![BigInt::from(6)]);
        let trivial = Level::uniform(&r.group, 6).unwrap();
        let c = r.coinvariants(&trivial);
        for j in 1..4 {
            assert!(integer_homology(&c, j).is_trivial());
        }
    }

    #[test]
    fn norm_checks() {
        let k = koszul_resolution(1).unwrap();
        let lvl = Level::uniform(&k.group, 5).unwrap();
        let c = coinvariant_norm_check(&k.diff(1), &lvl);
        assert_eq!((c.coinvariant.clone(), c.group_ring.clone(), c.holds), (BigInt::from(2), BigInt::from(2), true));
        // collapsing can cancel: t - 1 at index 1 is 0
        let c = coinvariant_norm_check(&k.diff(1), &Level::uniform(&k.group, 1).unwrap());
        assert!(c.holds && c.coinvariant.is_zero());
        let z = coinvariant_norm_check(&GroupRingMatrix::zeros(2, 2), &lvl);
        assert!(z.holds && z.group_ring.is_zero());
    }

    #[test]
    fn induction_multiplicity() {
        let k = koszul_resolution(1).unwrap();
        let z2 = GroupSpec::free_abelian(2).unwrap();
        let ind = induce(&k, &z2, &Embedding::Coordinates(vec![0])).unwrap();
        assert_eq!(ind.ranks(), vec![1, 1]);
        assert_eq!(ind.diff(1).get(0, 0), GroupRingElement::minus_one(&z2, vec![1, 0]));
        let lvl = Level::uniform(&z2, 6).unwrap();
        let dec = induction_decomposition(&k, &z2, &[0], &lvl).unwrap();
        assert_eq!(dec.copies, 6);
        assert_eq!(dec.summand.ranks(), vec![6, 6]);
        // Δ = Γ is the identity
        let same = induce(&k, &k.group, &Embedding::Coordinates(vec![0])).unwrap();
        assert_eq!(same, k);
        assert!(induce(&k, &z2, &Embedding::CyclicSubgroup).is_err());
    }

    #[test]
    fn cyclic_induction() {
        let r = cyclic_resolution(2, 3).unwrap();
        let g6 = GroupSpec::cyclic(6).unwrap();
        let ind = induce(&r, &g6, &Embedding::CyclicSubgroup).unwrap();
        assert_eq!(ind.diff(1).get(0, 0), GroupRingElement::minus_one(&g6, vec![3]));
    }

    #[test]
    fn coinvariants_commute_with_cones() {
        // Cone of multiplication by (t_2 - 1) on ind Koszul(1)
        let z2 = GroupSpec::free_abelian(2).unwrap();
        let p = Arc::new(induce(&koszul_resolution(1).unwrap(), &z2, &Embedding::Coordinates(vec![0])).unwrap());
        let lvl = Level::uniform(&z2, 3).unwrap();
        let m = GroupRingElement::minus_one(&z2, vec![0, 1]);
        let f = EquivariantMap::new(
            p.clone(),
            p.clone(),
            0,
            vec![
                GroupRingMatrix::from_entries(1, 1, vec![(0, 0, m.clone())]),
                GroupRingMatrix::from_entries(1, 1, vec![(0, 0, m)]),
            ],
        )
        .unwrap();
        f.check_chain_map().unwrap();
        let cone = equivariant_cone(&f).unwrap();
        assert_eq!(cone.ranks(), vec![1, 2, 1]);
        let pl = Arc::new(p.coinvariants(&lvl));
        let fl = f.coinvariants(&lvl, pl.clone(), pl).unwrap();
        let direct = crate::zchain::cone_complex(&fl);
        let via = cone.coinvariants(&lvl);
        for j in 0..=2 {
            assert_eq!(direct.diff(j), via.diff(j));
        }
    }

    #[test]
    fn coarse_circle_descends() {
        for d in [1, 3, 8] {
            let r = equivariant_coarse_circle(d).unwrap();
            let q = Quality::integers(d as i64, 1).unwrap();
            let g = GroupSpec::free_abelian(1).unwrap();
            let down = descend_retract(&r, &Level::uniform(&g, 1).unwrap(), 1, &q, RebuildKind::Full).unwrap();
            let plain = coarse_circle_retract(d).unwrap();
            assert_eq!(down.certificate.ledger, evaluate_quality(&plain, 1, &q, RebuildKind::Full));
            assert_eq!(down.certificate.retract.big_xi.at(0), plain.big_xi.at(0));
            // a finer level gives S^[0,3d] -> S^[0,3]
            let fine = descend_retract(&r, &Level::uniform(&g, 3).unwrap(), 1, &q, RebuildKind::Full).unwrap();
            assert_eq!(fine.certificate.retract.xp.ranks(), vec![3, 3]);
        }
    }

    #[test]
    fn koszul_self_retract_needs_larger_kappa() {
        let k = Arc::new(koszul_resolution(2).unwrap());
        let id = EquivariantRetract::identity(k.clone());
        let lvl = Level::uniform(&k.group, 4).unwrap();
        let one = Quality::integers(1, 1).unwrap();
        let err = descend_retract(&id, &lvl, 2, &one, RebuildKind::Weak).unwrap_err();
        assert!(matches!(err, Error::QualityViolation { degree: 2, .. }), "{err}");
        // κ = ln 4 puts ||d_2|| = 4 exactly on the bound
        let q = Quality::new(BigInt::one().into(), rebuild::Kappa::float(4f64.ln())).unwrap();
        let err = descend_retract(&id, &lvl, 2, &q, RebuildKind::Weak).unwrap_err();
        assert!(matches!(err, Error::Indeterminate { degree: 2, .. }), "{err}");
        let q = Quality::new(BigInt::one().into(), rebuild::Kappa::float(1.4)).unwrap();
        descend_retract(&id, &lvl, 2, &q, RebuildKind::Weak).unwrap();
        let k1 = Arc::new(koszul_resolution(1).unwrap());
        descend_retract(&EquivariantRetract::identity(k1), &Level::uniform(&GroupSpec::free_abelian(1).unwrap(), 5).unwrap(), 1, &one, RebuildKind::Full).unwrap();
    }

    #[test]
    fn json_round_trip() {
        for x in [koszul_resolution(2).unwrap(), cyclic_resolution(4, 3).unwrap()] {
            let s = serde_json::to_string(&x.to_json()).unwrap();
            let back = EquivariantComplex::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn chain_validation() {
        let z = GroupSpec::free_abelian(1).unwrap();
        assert!(ResidualChain::from_moduli(z.clone(), &[1, 2, 4]).is_ok());
        assert!(ResidualChain::from_moduli(z.clone(), &[1, 3, 4]).is_err());
        assert!(ResidualChain::from_moduli(z, &[2, 2]).is_err());
        let c6 = GroupSpec::cyclic(6).unwrap();
        assert!(ResidualChain::from_moduli(c6.clone(), &[1, 6, 6]).is_ok());
        assert!(ResidualChain::from_moduli(c6, &[1, 2]).is_err());
    }
}
