//! Sparse integer matrices in compressed-column form.
//!
//! Column `c` lists its nonzero entries as `(row, value)` pairs sorted by row.
//! A matrix `A` with `cols` columns represents a homomorphism
//! `Z^cols -> Z^rows` acting on column vectors.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Default)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
    // machine-integer copy for the fast paths, built on first use; `None`
    // inside when an entry does not fit
    small: OnceLock<Option<Arc<SmallColumns>>>,
}

impl PartialEq for IntMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.columns == other.columns
    }
}

impl Eq for IntMatrix {}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} ", self.rows, self.cols)?;
        if self.rows <= 8 && self.cols <= 8 {
            f.debug_list().entries(self.to_dense()).finish()
        } else {
            write!(f, "(nnz {})", self.nnz())
        }
    }
}

/// Compressed columns with machine-integer values.
#[derive(Debug)]
struct SmallColumns {
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<i64>,
}

/// Serialized entry: `[row, col, "decimal value"]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Triplet(pub usize, pub usize, pub String);

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, columns: vec![Vec::new(); cols], small: OnceLock::new() }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, BigInt::one())]).collect();
        IntMatrix { rows: n, cols: n, columns, small: OnceLock::new() }
    }

    pub fn scalar(n: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zeros(n, n);
        }
        let columns = (0..n).map(|i| vec![(i, c.clone())]).collect();
        IntMatrix { rows: n, cols: n, columns, small: OnceLock::new() }
    }

    /// Builds from row-major dense data.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: usize, cols: usize, data: &[Vec<T>]) -> Self {
        assert_eq!(data.len(), rows, "row count");
        let mut m = Self::zeros(rows, cols);
        for (r, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "column count in row {r}");
            for (c, v) in row.iter().enumerate() {
                let v: BigInt = v.clone().into();
                if !v.is_zero() {
                    m.columns[c].push((r, v));
                }
            }
        }
        m
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            columns[c].push((r, v));
        }
        for col in &mut columns {
            normalize_column(col);
        }
        IntMatrix { rows, cols, columns, small: OnceLock::new() }
    }

    /// Builds from columns given as (row, value) lists; duplicates are summed.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, BigInt)>>) -> Self {
        let cols = columns.len();
        let mut columns = columns;
        for col in &mut columns {
            assert!(col.iter().all(|(r, _)| *r < rows), "row index out of range");
            normalize_column(col);
        }
        IntMatrix { rows, cols, columns, small: OnceLock::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[(usize, BigInt)]> {
        self.columns.iter().map(|c| c.as_slice())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.columns[c].binary_search_by_key(&r, |(row, _)| *row) {
            Ok(i) => self.columns[c][i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn from_dense(d: &[Vec<BigInt>], rows: usize, cols: usize) -> Self {
        Self::from_rows(rows, cols, d)
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                columns[*r].push((c, v.clone()));
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, columns, small: OnceLock::new() }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "product of {}x{} and {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        if let Some(m) = self.mul_small(rhs) {
            return m;
        }
        let mut acc = vec![BigInt::zero(); self.rows];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.rows];
        let mut columns = Vec::with_capacity(rhs.cols);
        for rcol in &rhs.columns {
            for (k, b) in rcol {
                for (i, a) in &self.columns[*k] {
                    if !mark[*i] {
                        mark[*i] = true;
                        touched.push(*i);
                    }
                    acc[*i] += a * b;
                }
            }
            touched.sort_unstable();
            let mut col = Vec::with_capacity(touched.len());
            for &i in &touched {
                mark[i] = false;
                let v = std::mem::take(&mut acc[i]);
                if !v.is_zero() {
                    col.push((i, v));
                }
            }
            touched.clear();
            columns.push(col);
        }
        IntMatrix { rows: self.rows, cols: rhs.cols, columns, small: OnceLock::new() }
    }

    /// Whether `Σ s·A·B + Σ s·C + e·I` vanishes, without materializing the
    /// products. All terms must share one shape, square when `e ≠ 0`.
    pub fn combination_is_zero(products: &[(i64, &IntMatrix, &IntMatrix)], singles: &[(i64, &IntMatrix)], e: i64) -> bool {
        if let Some(z) = Self::combination_small(products, singles, e) {
            return z;
        }
        let mut total: Option<IntMatrix> = None;
        let mut push = |m: IntMatrix| {
            total = Some(match total.take() {
                Some(t) => t.add(&m),
                None => m,
            })
        };
        for (s, a, b) in products {
            push(a.mul(b).scale(&BigInt::from(*s)));
        }
        for (s, c) in singles {
            push(c.scale(&BigInt::from(*s)));
        }
        if e != 0 {
            let n = products.first().map(|p| p.1.rows).or(singles.first().map(|s| s.1.rows)).unwrap_or(0);
            push(IntMatrix::scalar(n, e));
        }
        total.is_none_or(|t| t.nnz() == 0)
    }

    fn combination_small(products: &[(i64, &IntMatrix, &IntMatrix)], singles: &[(i64, &IntMatrix)], e: i64) -> Option<bool> {
        let (rows, cols) = match (products.first(), singles.first()) {
            (Some((_, a, b)), _) => (a.rows, b.cols),
            (None, Some((_, c))) => (c.rows, c.cols),
            (None, None) => return Some(true),
        };
        assert!(e == 0 || rows == cols, "identity term in a non-square combination");
        for (_, a, b) in products {
            assert!(a.rows == rows && b.cols == cols && a.cols == b.rows, "combination of mismatched shapes");
        }
        for (_, c) in singles {
            assert!(c.rows == rows && c.cols == cols, "combination of mismatched shapes");
        }
        let prods = products
            .iter()
            .map(|(s, a, b)| Some((*s, a.to_small()?, b.to_small()?)))
            .collect::<Option<Vec<_>>>()?;
        let sing = singles.iter().map(|(s, c)| Some((*s, c.to_small()?))).collect::<Option<Vec<_>>>()?;
        let mut acc = vec![0i64; rows];
        let mut touched: Vec<usize> = Vec::new();
        for c in 0..cols {
            for (s, a, b) in &prods {
                let (lo, hi) = (b.ptr[c], b.ptr[c + 1]);
                for (&k, &y) in b.idx[lo..hi].iter().zip(&b.val[lo..hi]) {
                    let y = s.checked_mul(y)?;
                    let (lo, hi) = (a.ptr[k], a.ptr[k + 1]);
                    touched.extend_from_slice(&a.idx[lo..hi]);
                    for (&i, &x) in a.idx[lo..hi].iter().zip(&a.val[lo..hi]) {
                        acc[i] = acc[i].checked_add(x.checked_mul(y)?)?;
                    }
                }
            }
            for (s, m) in &sing {
                let (lo, hi) = (m.ptr[c], m.ptr[c + 1]);
                touched.extend_from_slice(&m.idx[lo..hi]);
                for (&i, &x) in m.idx[lo..hi].iter().zip(&m.val[lo..hi]) {
                    acc[i] = acc[i].checked_add(s.checked_mul(x)?)?;
                }
            }
            if e != 0 {
                touched.push(c);
                acc[c] = acc[c].checked_add(e)?;
            }
            let mut zero = true;
            for &i in &touched {
                zero &= acc[i] == 0;
                acc[i] = 0;
            }
            touched.clear();
            if !zero {
                return Some(false);
            }
        }
        Some(true)
    }

    /// Entries as flat `i64` arrays, or `None` if one does not fit.
    fn to_small(&self) -> Option<Arc<SmallColumns>> {
        self.small
            .get_or_init(|| {
                let mut ptr = Vec::with_capacity(self.cols + 1);
                let mut idx = Vec::with_capacity(self.nnz());
                let mut val = Vec::with_capacity(self.nnz());
                ptr.push(0);
                for col in &self.columns {
                    for (r, v) in col {
                        idx.push(*r);
                        val.push(v.to_i64()?);
                    }
                    ptr.push(idx.len());
                }
                Some(Arc::new(SmallColumns { ptr, idx, val }))
            })
            .clone()
    }

    /// The product in machine integers, or `None` when an entry does not fit
    /// in an `i64` or an accumulator overflows.
    fn mul_small(&self, rhs: &IntMatrix) -> Option<IntMatrix> {
        let a = self.to_small()?;
        let b = rhs.to_small()?;
        let mut acc = vec![0i128; self.rows];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.rows];
        let mut columns = Vec::with_capacity(rhs.cols);
        for c in 0..rhs.cols {
            for p in b.ptr[c]..b.ptr[c + 1] {
                let (k, y) = (b.idx[p], b.val[p] as i128);
                for q in a.ptr[k]..a.ptr[k + 1] {
                    let i = a.idx[q];
                    if !mark[i] {
                        mark[i] = true;
                        touched.push(i);
                    }
                    acc[i] = acc[i].checked_add(a.val[q] as i128 * y)?;
                }
            }
            touched.sort_unstable();
            let mut col = Vec::with_capacity(touched.len());
            for &i in &touched {
                mark[i] = false;
                let v = std::mem::take(&mut acc[i]);
                if v != 0 {
                    col.push((i, BigInt::from(v)));
                }
            }
            touched.clear();
            columns.push(col);
        }
        Some(IntMatrix { rows: self.rows, cols: rhs.cols, columns, small: OnceLock::new() })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![BigInt::zero(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            if v[c].is_zero() {
                continue;
            }
            for (r, a) in col {
                out[*r] += a * &v[c];
            }
        }
        out
    }

    fn zip_with(&self, rhs: &IntMatrix, sign: i32) -> IntMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sum of differently shaped matrices");
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let ra = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
                    let rb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
                    if ra < rb {
                        out.push(a[i].clone());
                        i += 1;
                    } else if rb < ra {
                        let v = if sign > 0 { b[j].1.clone() } else { -&b[j].1 };
                        out.push((rb, v));
                        j += 1;
                    } else {
                        let v = if sign > 0 { &a[i].1 + &b[j].1 } else { &a[i].1 - &b[j].1 };
                        if !v.is_zero() {
                            out.push((ra, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                out
            })
            .collect();
        IntMatrix { rows: self.rows, cols: self.cols, columns, small: OnceLock::new() }
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, 1)
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, -1)
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, v * c)).collect())
            .collect();
        IntMatrix { rows: self.rows, cols: self.cols, columns, small: OnceLock::new() }
    }

    /// The l1 operator norm: maximal column sum of absolute values, 0 when empty.
    pub fn l1_norm(&self) -> BigInt {
        let small = self
            .columns
            .iter()
            .map(|col| col.iter().try_fold(0i128, |acc, (_, v)| acc.checked_add(v.to_i64()?.unsigned_abs() as i128)))
            .try_fold(0i128, |m, c| c.map(|c| m.max(c)));
        if let Some(n) = small {
            return BigInt::from(n);
        }
        self.columns
            .iter()
            .map(|col| col.iter().map(|(_, v)| v.abs()).sum::<BigInt>())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Block diagonal sum `diag(self, rhs)`.
    pub fn block_diag(&self, rhs: &IntMatrix) -> IntMatrix {
        let mut columns = self.columns.clone();
        for col in &rhs.columns {
            columns.push(col.iter().map(|(r, v)| (r + self.rows, v.clone())).collect());
        }
        IntMatrix { rows: self.rows + rhs.rows, cols: self.cols + rhs.cols, columns, small: OnceLock::new() }
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        let mut columns = self.columns.clone();
        columns.extend(rhs.columns.iter().cloned());
        IntMatrix { rows: self.rows, cols: self.cols + rhs.cols, columns, small: OnceLock::new() }
    }

    /// `[self ; rhs]` (self on top).
    pub fn vstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut col = a.clone();
                col.extend(b.iter().map(|(r, v)| (r + self.rows, v.clone())));
                col
            })
            .collect();
        IntMatrix { rows: self.rows + rhs.rows, cols: self.cols, columns, small: OnceLock::new() }
    }

    /// 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn block2(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> IntMatrix {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let columns = idx.iter().map(|&c| self.columns[c].clone()).collect();
        IntMatrix { rows: self.rows, cols: idx.len(), columns, small: OnceLock::new() }
    }

    /// Keeps the listed rows, renumbered in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut map = vec![usize::MAX; self.rows];
        for (new, &old) in idx.iter().enumerate() {
            map[old] = new;
        }
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let mut out: Vec<(usize, BigInt)> = col
                    .iter()
                    .filter(|(r, _)| map[*r] != usize::MAX)
                    .map(|(r, v)| (map[*r], v.clone()))
                    .collect();
                out.sort_by_key(|e| e.0);
                out
            })
            .collect();
        IntMatrix { rows: idx.len(), cols: self.cols, columns, small: OnceLock::new() }
    }

    /// Permutation matrix sending basis vector `i` to `perm[i]`.
    pub fn permutation(perm: &[usize]) -> IntMatrix {
        let n = perm.len();
        let columns = perm.iter().map(|&t| vec![(t, BigInt::one())]).collect();
        IntMatrix { rows: n, cols: n, columns, small: OnceLock::new() }
    }

    pub fn to_triplets(&self) -> Vec<Triplet> {
        self.entries().map(|(r, c, v)| Triplet(r, c, v.to_string())).collect()
    }

    pub fn from_triplet_list(rows: usize, cols: usize, t: &[Triplet]) -> Result<Self, String> {
        let mut entries = Vec::with_capacity(t.len());
        for Triplet(r, c, v) in t {
            if *r >= rows || *c >= cols {
                return Err(format!("entry ({r},{c}) outside {rows}x{cols}"));
            }
            let v: BigInt = v.parse().map_err(|_| format!("bad integer `{v}`"))?;
            entries.push((*r, *c, v));
        }
        Ok(Self::from_triplets(rows, cols, entries))
    }
}

fn normalize_column(col: &mut Vec<(usize, BigInt)>) {
    if col.windows(2).all(|w| w[0].0 < w[1].0) && col.iter().all(|(_, v)| !v.is_zero()) {
        return;
    }
    col.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(col.len());
    for (r, v) in col.drain(..) {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    *col = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let data: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        let c = data.first().map(|r| r.len()).unwrap_or(0);
        IntMatrix::from_rows(data.len(), c, &data)
    }

    #[test]
    fn product_matches_dense() {
        let a = m(&[&[1, 2, 0], &[0, -1, 3]]);
        let b = m(&[&[1, 0], &[2, 1], &[0, -1]]);
        assert_eq!(a.mul(&b), m(&[&[5, 2], &[-2, -4]]));
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn l1_norm_is_max_column_sum() {
        assert_eq!(m(&[&[3], &[-4]]).l1_norm(), BigInt::from(7));
        assert_eq!(IntMatrix::zeros(3, 0).l1_norm(), BigInt::zero());
        assert_eq!(IntMatrix::zeros(2, 2).l1_norm(), BigInt::zero());
    }

    #[test]
    fn sums_cancel_to_empty_columns() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.add(&a.neg()).nnz(), 0);
    }

    #[test]
    fn blocks() {
        let a = m(&[&[1]]);
        let b = m(&[&[2, 3]]);
        let d = a.block_diag(&b);
        assert_eq!(d, m(&[&[1, 0, 0], &[0, 2, 3]]));
        assert_eq!(a.hstack(&b), m(&[&[1, 2, 3]]));
        assert_eq!(d.select_rows(&[1]), m(&[&[0, 2, 3]]));
    }
}
