//! `(T, κ)`-quality certificates for homotopy retracts, the circle examples,
//! and the stability constructors for sums, mapping cones and compositions.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::htpy::HomotopyRetract;
use crate::int::{ln_abs, log_plus};
use crate::matrix::IntMatrix;
use crate::zchain::{self, BasedComplex, ComplexJson, GradedMap, HomotopySquare, MapJson};

/// Values within this distance of a norm bound (in log space) are reported
/// as indeterminate rather than certified.
pub const GUARD_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RebuildKind {
    Domination,
    Weak,
    Full,
}

impl fmt::Display for RebuildKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RebuildKind::Domination => "domination",
            RebuildKind::Weak => "weak",
            RebuildKind::Full => "full",
        };
        f.write_str(s)
    }
}

/// `κ` as a float, with an exact rational value when one is known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kappa {
    pub value: f64,
    #[serde(default, with = "opt_rational")]
    pub exact: Option<BigRational>,
}

impl Kappa {
    pub fn exact(q: BigRational) -> Self {
        Kappa { value: rational_to_f64(&q), exact: Some(q) }
    }

    pub fn integer(k: i64) -> Self {
        Self::exact(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn float(value: f64) -> Self {
        Kappa { value, exact: None }
    }

    /// `max{κ1, κ2}`, exact when both are.
    pub fn max(&self, other: &Kappa) -> Kappa {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Kappa::exact(a.max(b).clone()),
            _ => Kappa::float(self.value.max(other.value)),
        }
    }

    /// `2 κ1 κ2`, exact when both are.
    pub fn doubled_product(&self, other: &Kappa) -> Kappa {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Kappa::exact(BigRational::from_integer(BigInt::from(2)) * a * b),
            _ => Kappa::float(2.0 * self.value * other.value),
        }
    }
}

mod opt_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(q) => s.serialize_some(&q.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let v: Option<String> = Option::deserialize(d)?;
        v.map(|s| super::parse_rational(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    // ratio of logs keeps huge numerators and denominators in range
    let (n, d) = (q.numer(), q.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            let sign = if n.is_negative() { -1.0 } else { 1.0 };
            sign * (ln_abs(n) - ln_abs(d)).exp()
        }
    }
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"4.9"`.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
        let b: BigInt = b.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
        if b.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| format!("bad number `{s}`"))?;
        let d = BigInt::from(10).pow(frac.len() as u32);
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| format!("bad number `{s}`"))?;
    Ok(BigRational::from_integer(n))
}

/// Quality `(T, κ)` with `T, κ >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quality {
    #[serde(with = "rational_str")]
    pub t: BigRational,
    pub kappa: Kappa,
}

mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let v = String::deserialize(d)?;
        super::parse_rational(&v).map_err(serde::de::Error::custom)
    }
}

impl Quality {
    pub fn new(t: BigRational, kappa: Kappa) -> Result<Self> {
        if t < BigRational::one() {
            return Err(Error::InvalidArgument(format!("T = {t} must be at least 1")));
        }
        if !(kappa.value >= 1.0) || kappa.exact.as_ref().is_some_and(|k| *k < BigRational::one()) {
            return Err(Error::InvalidArgument(format!("κ = {} must be at least 1", kappa.value)));
        }
        Ok(Quality { t, kappa })
    }

    pub fn integers(t: i64, kappa: i64) -> Result<Self> {
        Self::new(BigRational::from_integer(BigInt::from(t)), Kappa::integer(kappa))
    }

    pub fn t_f64(&self) -> f64 {
        rational_to_f64(&self.t)
    }

    /// `ln(exp(κ) T^κ) = κ (1 + ln T)`.
    pub fn log_norm_bound(&self) -> f64 {
        self.kappa.value * (1.0 + self.t_f64().ln())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

/// One inequality of a certificate, with both sides rendered.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub degree: i32,
    pub inequality: String,
    pub lhs: String,
    pub rhs: String,
    pub status: Status,
}

/// A verified retract with a `(T, κ)` certificate in degrees `<= n`.
#[derive(Clone, Debug)]
pub struct CertifiedRebuilding {
    pub retract: HomotopyRetract,
    pub n: i32,
    pub kind: RebuildKind,
    pub quality: Quality,
    pub ledger: Vec<LedgerEntry>,
}

pub(crate) fn rank_entry(degree: i32, small: usize, big: usize, q: &Quality) -> LedgerEntry {
    let inequality = format!("rk X'_{degree} <= κ T^-1 rk X_{degree}");
    let lhs = small.to_string();
    let status;
    let rhs;
    if small == 0 {
        status = Status::Pass;
        rhs = format!("{:.6}", q.kappa.value * big as f64 / q.t_f64());
    } else if let Some(k) = &q.kappa.exact {
        let bound = k * BigRational::from_integer(BigInt::from(big)) / &q.t;
        status = if BigRational::from_integer(BigInt::from(small)) <= bound { Status::Pass } else { Status::Fail };
        rhs = bound.to_string();
    } else {
        // compare small * T against κ * big in floating point with a guard band
        let l = small as f64 * q.t_f64();
        let r = q.kappa.value * big as f64;
        status = if l <= r * (1.0 - GUARD_BAND) {
            Status::Pass
        } else if l > r * (1.0 + GUARD_BAND) {
            Status::Fail
        } else {
            Status::Indeterminate
        };
        rhs = format!("{:.12}", r / q.t_f64());
    }
    LedgerEntry { degree, inequality, lhs, rhs, status }
}

pub(crate) fn norm_entry(degree: i32, name: &str, norm: &BigInt, q: &Quality) -> LedgerEntry {
    let inequality = format!("||{name}_{degree}|| <= exp(κ) T^κ");
    let bound = q.log_norm_bound();
    let status = if norm.is_zero() {
        Status::Pass
    } else {
        let l = ln_abs(norm);
        if l <= bound - GUARD_BAND {
            Status::Pass
        } else if l > bound + GUARD_BAND {
            Status::Fail
        } else {
            Status::Indeterminate
        }
    };
    LedgerEntry {
        degree,
        inequality,
        lhs: norm.to_string(),
        rhs: format!("{:.12e}", bound.exp()),
        status,
    }
}

/// Evaluates every inequality of an `n`-rebuilding of the given kind.
pub fn evaluate_quality(r: &HomotopyRetract, n: i32, quality: &Quality, kind: RebuildKind) -> Vec<LedgerEntry> {
    let lo = r.x.lo().min(r.xp.lo());
    let mut ledger = Vec::new();
    for j in lo..=n {
        ledger.push(rank_entry(j, r.xp.rank(j), r.x.rank(j), quality));
    }
    if kind >= RebuildKind::Weak {
        for j in lo..=n {
            ledger.push(norm_entry(j, "d'", &r.xp.diff_norm(j), quality));
            ledger.push(norm_entry(j, "ξ", &r.xi.norm(j), quality));
        }
    }
    if kind == RebuildKind::Full {
        for j in lo..=n {
            ledger.push(norm_entry(j, "ξ'", &r.xip.norm(j), quality));
            ledger.push(norm_entry(j, "Ξ", &r.big_xi.norm(j), quality));
        }
    }
    ledger
}

/// Verifies the retract and certifies it as an `n`-rebuilding of the given
/// kind and quality; fails on the first violated or indeterminate inequality.
pub fn check_quality(r: &HomotopyRetract, n: i32, quality: &Quality, kind: RebuildKind) -> Result<CertifiedRebuilding> {
    certify(r.clone(), n, quality, kind)
}

fn certify(r: HomotopyRetract, n: i32, quality: &Quality, kind: RebuildKind) -> Result<CertifiedRebuilding> {
    r.verify()?;
    let ledger = evaluate_quality(&r, n, quality, kind);
    for e in &ledger {
        let err = |indet: bool| {
            let (degree, inequality, lhs, rhs) = (e.degree, e.inequality.clone(), e.lhs.clone(), e.rhs.clone());
            if indet {
                Error::Indeterminate { degree, inequality, lhs, rhs }
            } else {
                Error::QualityViolation { degree, inequality, lhs, rhs }
            }
        };
        match e.status {
            Status::Pass => {}
            Status::Fail => return Err(err(false)),
            Status::Indeterminate => return Err(err(true)),
        }
    }
    Ok(CertifiedRebuilding { retract: r, n, kind, quality: quality.clone(), ledger })
}

impl CertifiedRebuilding {
    /// Re-runs [`check_quality`] from scratch.
    pub fn recheck(&self) -> Result<CertifiedRebuilding> {
        check_quality(&self.retract, self.n, &self.quality, self.kind)
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            n: self.n,
            kind: self.kind,
            quality: self.quality.clone(),
            x: self.retract.x.to_json(),
            x_prime: self.retract.xp.to_json(),
            xi: self.retract.xi.to_json(),
            xi_prime: self.retract.xip.to_json(),
            big_xi: self.retract.big_xi.to_json(),
            ledger: self.ledger.clone(),
        }
    }

    /// Rebuilds the retract from its serialized form and re-certifies it;
    /// the stored ledger is not trusted.
    pub fn from_json(json: &CertificateJson) -> Result<CertifiedRebuilding> {
        let x = Arc::new(BasedComplex::from_json(&json.x)?);
        let xp = Arc::new(BasedComplex::from_json(&json.x_prime)?);
        let xi = GradedMap::from_json(&json.xi, x.clone(), xp.clone())?;
        let xip = GradedMap::from_json(&json.xi_prime, xp, x.clone())?;
        let big = GradedMap::from_json(&json.big_xi, x.clone(), x)?;
        let r = HomotopyRetract::new(xi, xip, big)?;
        let q = Quality::new(json.quality.t.clone(), json.quality.kappa.clone())?;
        check_quality(&r, json.n, &q, json.kind)
    }
}

/// Serialized certificate: the full retract, the claim and the audit ledger.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub n: i32,
    pub kind: RebuildKind,
    pub quality: Quality,
    pub x: ComplexJson,
    pub x_prime: ComplexJson,
    pub xi: MapJson,
    pub xi_prime: MapJson,
    pub big_xi: MapJson,
    pub ledger: Vec<LedgerEntry>,
}

fn one() -> BigInt {
    BigInt::one()
}

/// `S^[0,d]`: vertices `v_0..v_{d-1}`, edges `e_0..e_{d-1}` with
/// `d e_i = v_{i+1 mod d} - v_i`.
pub fn circle_complex(d: usize) -> Result<BasedComplex> {
    if d < 1 {
        return Err(Error::InvalidArgument("circle needs d >= 1".into()));
    }
    let mut entries = Vec::new();
    for i in 0..d {
        entries.push(((i + 1) % d, i, one()));
        entries.push((i, i, -one()));
    }
    let d1 = IntMatrix::from_triplets(d, d, entries);
    let labels = vec![(0..d).map(|i| format!("v{i}")).collect(), (0..d).map(|i| format!("e{i}")).collect()];
    BasedComplex::new(0, labels, vec![IntMatrix::zeros(0, d), d1])
}

/// Circles up to this length are built once per thread and shared.
const CIRCLE_CACHE_MAX: usize = 1024;

thread_local! {
    static CIRCLES: RefCell<HashMap<usize, Arc<BasedComplex>>> = RefCell::new(HashMap::new());
}

fn shared_circle(d: usize) -> Result<Arc<BasedComplex>> {
    if d > CIRCLE_CACHE_MAX {
        return Ok(Arc::new(circle_complex(d)?));
    }
    if let Some(c) = CIRCLES.with(|m| m.borrow().get(&d).cloned()) {
        return Ok(c);
    }
    let c = Arc::new(circle_complex(d)?);
    CIRCLES.with(|m| m.borrow_mut().insert(d, c.clone()));
    Ok(c)
}

/// The retract of `S^[0,d]` onto `S^[0,1]` collapsing everything to `v_0`.
pub fn coarse_circle_retract(d: usize) -> Result<HomotopyRetract> {
    let x = Arc::new(circle_complex(d)?);
    let xp = Arc::new(circle_complex(1)?);
    let xi = GradedMap::new(
        x.clone(),
        xp.clone(),
        0,
        vec![
            IntMatrix::from_triplets(1, d, (0..d).map(|i| (0, i, one()))),
            IntMatrix::from_triplets(1, d, vec![(0, 0, one())]),
        ],
    )?;
    let xip = GradedMap::new(
        xp,
        x.clone(),
        0,
        vec![
            IntMatrix::from_triplets(d, 1, vec![(0, 0, one())]),
            IntMatrix::from_triplets(d, 1, (0..d).map(|i| (i, 0, one()))),
        ],
    )?;
    let mut h0 = Vec::new();
    for i in 1..d {
        for k in i..d {
            h0.push((k, i, -one()));
        }
    }
    let big = GradedMap::new(
        x.clone(),
        x.clone(),
        1,
        vec![IntMatrix::from_triplets(d, d, h0), IntMatrix::zeros(0, d)],
    )?;
    HomotopyRetract::new(xi, xip, big)
}

/// Cut points `0 = a_0 < ... < a_m = d` with `T/2 <= a_{k+1} - a_k <= T`.
///
/// Chunks have length `⌈T/2⌉`; a short remainder is merged into the last
/// chunk when that stays within `⌊T⌋`, otherwise the lengths are rebalanced.
/// Some non-integral `T` admit no such sequence (e.g. `d = 5`, `T = 4.9`).
pub fn circle_chunks(d: usize, t: &BigRational) -> Result<Vec<usize>> {
    let half = t / BigRational::from_integer(BigInt::from(2));
    let lo = half.ceil().to_integer().to_usize().unwrap_or(usize::MAX).max(1);
    let hi = t.floor().to_integer().to_usize().unwrap_or(usize::MAX);
    if lo > hi {
        return Err(Error::InvalidArgument(format!("no chunk length between T/2 and T for T = {t}")));
    }
    let q = d / lo;
    let r = d % lo;
    let lengths: Vec<usize> = if r == 0 {
        vec![lo; q]
    } else if q >= 1 && lo + r <= hi {
        let mut v = vec![lo; q];
        *v.last_mut().unwrap() += r;
        v
    } else {
        let fits = |m: usize| m > 0 && m.saturating_mul(lo) <= d && d <= m.saturating_mul(hi);
        let m = [q, q + 1].into_iter().find(|&m| fits(m)).or_else(|| (1..=d).find(|&m| fits(m)));
        let Some(m) = m else {
            return Err(Error::InvalidArgument(format!(
                "S^[0,{d}] cannot be cut into pieces of length between T/2 and T for T = {t}"
            )));
        };
        let (base, extra) = d.div_rem(&m);
        (0..m).map(|k| base + usize::from(k < extra)).collect()
    };
    let mut a = vec![0];
    for l in lengths {
        a.push(a.last().unwrap() + l);
    }
    Ok(a)
}

/// The retract of `S^[0,d]` onto `S^[0,m]` for cut points `a`.
pub fn chunked_circle_retract(d: usize, a: &[usize]) -> Result<HomotopyRetract> {
    let r = chunked_parts(d, a)?;
    r.verify()?;
    Ok(r)
}

/// The maps of [`chunked_circle_retract`], not yet verified.
fn chunked_parts(d: usize, a: &[usize]) -> Result<HomotopyRetract> {
    let m = a.len() - 1;
    if a[0] != 0 || a[m] != d || a.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("cut points must increase from 0 to d".into()));
    }
    let x = shared_circle(d)?;
    let xp = shared_circle(m)?;
    // chunk k is (a_{k-1}, a_k] in coordinates 0..=d, vertex d being v_0; it
    // retracts onto its middle vertex r_k, and r_0 = r_m - d
    let mut rep = vec![0usize; m + 1];
    for k in 1..=m {
        rep[k] = a[k - 1] + (a[k] - a[k - 1]).div_ceil(2);
    }
    let r0 = rep[m] as isize - d as isize;
    let at = |c: isize| c.rem_euclid(d as isize) as usize;
    let mut xi0 = Vec::with_capacity(d);
    let mut h = vec![Vec::new(); d];
    for k in 1..=m {
        for c in a[k - 1] + 1..=a[k] {
            xi0.push((k % m, c % d, one()));
            let r = rep[k];
            h[c % d] = if c < r { (c..r).map(|l| (l, -one())).collect() } else { (r..c).map(|l| (l, one())).collect() };
        }
    }
    let xi0 = IntMatrix::from_triplets(m, d, xi0);
    let xi1 = IntMatrix::from_triplets(m, d, (0..m).map(|k| (k, a[k], one())));
    let xip0 = IntMatrix::from_triplets(d, m, (1..=m).map(|k| (rep[k] % d, k % m, one())));
    let mut e = Vec::new();
    for k in 0..m {
        let from = if k == 0 { r0 } else { rep[k] as isize };
        e.extend((from..rep[k + 1] as isize).map(|l| (at(l), k, one())));
    }
    let xip1 = IntMatrix::from_triplets(d, m, e);
    let h0 = IntMatrix::from_columns(d, h);
    let xi = GradedMap::new(x.clone(), xp.clone(), 0, vec![xi0, xi1])?;
    let xip = GradedMap::new(xp, x.clone(), 0, vec![xip0, xip1])?;
    let big = GradedMap::new(x.clone(), x.clone(), 1, vec![h0, IntMatrix::zeros(0, d)])?;
    Ok(HomotopyRetract { x, xp: xi.target().clone(), xi, xip, big_xi: big })
}

/// A full `n`-rebuilding of `S^[0,d]` of quality `(T, 2)` (any `n`; the
/// complex lives in degrees 0 and 1).
pub fn circle_rebuild(d: usize, t: &BigRational, n: i32) -> Result<CertifiedRebuilding> {
    if *t > BigRational::from_integer(BigInt::from(d)) {
        return Err(Error::InvalidArgument(format!("T = {t} exceeds d = {d}")));
    }
    let a = circle_chunks(d, t)?;
    // certify verifies the retract
    let r = chunked_parts(d, &a)?;
    certify(r, n, &Quality::new(t.clone(), Kappa::integer(2))?, RebuildKind::Full)
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg.to_string()))
    }
}

/// Block sum of two rebuildings with the same `n`, `T` and kind; `κ = max{κ1, κ2}`.
pub fn sum_rebuild(r1: &CertifiedRebuilding, r2: &CertifiedRebuilding) -> Result<CertifiedRebuilding> {
    require(r1.n == r2.n, "sum of rebuildings with different n")?;
    require(r1.quality.t == r2.quality.t, "sum of rebuildings with different T")?;
    require(r1.kind == r2.kind, "sum of rebuildings of different kinds")?;
    let (a, b) = (&r1.retract, &r2.retract);
    let xi = a.xi.direct_sum(&b.xi)?;
    let x = xi.source().clone();
    let xp = xi.target().clone();
    let xip = a.xip.direct_sum(&b.xip)?.retarget(xp.clone(), x.clone())?;
    let big = a.big_xi.direct_sum(&b.big_xi)?.retarget(x.clone(), x)?;
    let r = HomotopyRetract::new(xi, xip, big)?;
    let q = Quality::new(r1.quality.t.clone(), r1.quality.kappa.max(&r2.quality.kappa))?;
    check_quality(&r, r1.n, &q, r1.kind)
}

/// `κ_X + κ_Y + ln 3 + max_{j <= n} log_+ ||f_j||`.
pub fn cone_kappa(kx: &Kappa, ky: &Kappa, f: &GradedMap, n: i32) -> Kappa {
    let fmax = f
        .source()
        .degrees()
        .filter(|&j| j <= n)
        .map(|j| log_plus(&f.norm(j)))
        .fold(0.0, f64::max);
    Kappa::float(kx.value + ky.value + 3f64.ln() + fmax)
}

/// Retract of `Cone(f)` onto `Cone(f')` with `f' = υ f ξ'`, from retracts
/// `(X, X', ξ, ξ', Ξ)` and `(Y, Y', υ, υ', Υ)`.
pub fn cone_retract(rx: &HomotopyRetract, ry: &HomotopyRetract, f: &GradedMap) -> Result<HomotopyRetract> {
    f.check_chain_map()?;
    let fp = ry.xi.compose(f)?.compose(&rx.xip)?;
    let cf = Arc::new(zchain::cone_complex(f));
    let cfp = Arc::new(zchain::cone_complex(&fp));
    let top_h = ry.xi.compose(f)?.compose(&rx.big_xi)?.neg();
    let top = HomotopySquare::new(f.clone(), fp.clone(), rx.xi.clone(), ry.xi.clone(), top_h)?;
    let bot_h = ry.big_xi.compose(f)?.compose(&rx.xip)?;
    let bottom = HomotopySquare::new(fp, f.clone(), rx.xip.clone(), ry.xip.clone(), bot_h)?;
    let xi = top.cone_map()?.retarget(cf.clone(), cfp.clone())?;
    let xip = bottom.cone_map()?.retarget(cfp, cf.clone())?;
    let x = &rx.x;
    let y = &ry.x;
    let ufx = ry.big_xi.compose(f)?.compose(&rx.big_xi)?;
    let psi = GradedMap::from_fn(cf.clone(), cf, 1, |j| {
        IntMatrix::block2(
            &rx.big_xi.at(j - 1).neg(),
            &IntMatrix::zeros(x.rank(j), y.rank(j)),
            &ufx.at(j - 1),
            &ry.big_xi.at(j),
        )
    })?;
    HomotopyRetract::new(xi, xip, psi)
}

/// Rebuilding of a mapping cone. `rx` must be a full rebuilding in degrees
/// `<= n - 1`; the result has the kind and degree bound of `ry` and
/// `κ = κ_X + κ_Y + ln 3 + max_{j <= n} log_+ ||f_j||`.
pub fn cone_rebuild(rx: &CertifiedRebuilding, ry: &CertifiedRebuilding, f: &GradedMap) -> Result<CertifiedRebuilding> {
    require(rx.kind == RebuildKind::Full, "the source rebuilding of a cone must be a full rebuilding")?;
    require(rx.n >= ry.n - 1, "the source rebuilding must reach degree n - 1")?;
    require(rx.quality.t == ry.quality.t, "cone of rebuildings with different T")?;
    let f = f.retarget(rx.retract.x.clone(), ry.retract.x.clone())?;
    let r = cone_retract(&rx.retract, &ry.retract, &f)?;
    let kappa = cone_kappa(&rx.quality.kappa, &ry.quality.kappa, &f, ry.n);
    let q = Quality::new(ry.quality.t.clone(), kappa)?;
    check_quality(&r, ry.n, &q, ry.kind)
}

/// Composition of weak rebuildings `X -> X'` of quality `(T, κ1)` and
/// `X' -> X''` of quality `(S, κ2)`: quality `(S T, 2 κ2 κ1)`.
pub fn compose_rebuild(r1: &CertifiedRebuilding, r2: &CertifiedRebuilding) -> Result<CertifiedRebuilding> {
    require(r1.n == r2.n, "composition of rebuildings with different n")?;
    require(
        r1.kind >= RebuildKind::Weak && r2.kind >= RebuildKind::Weak,
        "composition needs weak rebuildings",
    )?;
    if r1.retract.xp.ranks() != r2.retract.x.ranks() || r1.retract.xp.lo() != r2.retract.x.lo() {
        return Err(Error::Shape("the second retract does not start where the first ends".into()));
    }
    let r = r1.retract.then(&r2.retract)?;
    let q = Quality::new(&r1.quality.t * &r2.quality.t, r2.quality.kappa.doubled_product(&r1.quality.kappa))?;
    check_quality(&r, r1.n, &q, RebuildKind::Weak)
}
