//! Experiments: homology gradients along residual chains, torsion-bound
//! curves from amenable rebuildings, and the `Z^2` line-complex demo that
//! goes from a non-free complex to a certified rebuilding of its
//! replacement's coinvariants.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::equivariant::{
    equivariant_cone, induce, induction_decomposition, koszul_resolution, standard_resolution, Embedding,
    EquivariantComplex, EquivariantMap, GroupRingElement, GroupRingMatrix, GroupSpec, Level, ResidualChain,
};
use crate::error::{Error, Result};
use crate::folner::amenable_weak_rebuilding;
use crate::homology::{field_betti, integer_homology, Field};
use crate::htpy::precompose_iso;
use crate::rebuild::{
    check_quality, circle_rebuild, cone_rebuild, rational_to_f64, sum_rebuild, CertificateJson, CertifiedRebuilding,
    Quality, RebuildKind,
};
use crate::zchain::{cone_complex, GradedMap};

/// Renders with 12 significant digits, shortest form.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

pub const GRADIENT_HEADER: [&str; 9] =
    ["group", "j", "i", "index", "field", "betti", "log_tors", "betti_per_index", "log_tors_per_index"];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradientRow {
    pub group: String,
    pub j: i32,
    pub i: usize,
    pub index: String,
    pub field: String,
    pub betti: usize,
    pub log_tors: f64,
    /// `betti / index` as an exact fraction.
    pub betti_per_index: String,
    pub log_tors_per_index: f64,
    /// `"sample"`, or `"last sample"` on the final level.
    pub label: String,
}

impl GradientRow {
    fn record(&self) -> [String; 9] {
        let bpi = crate::rebuild::parse_rational(&self.betti_per_index).map(|q| rational_to_f64(&q)).unwrap_or(f64::NAN);
        [
            self.group.clone(),
            self.j.to_string(),
            self.i.to_string(),
            self.index.clone(),
            self.field.clone(),
            self.betti.to_string(),
            fmt12(self.log_tors),
            fmt12(bpi),
            fmt12(self.log_tors_per_index),
        ]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradientReport {
    pub group: String,
    pub degrees: Vec<i32>,
    pub fields: Vec<String>,
    pub chain: Vec<Vec<u64>>,
    pub resolution_top: i32,
    pub rows: Vec<GradientRow>,
    pub notes: Vec<String>,
}

const PREFIX_NOTE: &str = "gradients are limsups over an infinite chain; these rows are samples of a finite prefix and the last row is the last sample, not a limit";

/// Betti numbers over each field and the integral log torsion of
/// `H_j(X_{Λ_i})` for the standard resolution of `Z` over `ZΓ`.
pub fn gradient_experiment(
    chain: &ResidualChain,
    degrees: &[i32],
    fields: &[Field],
    top: Option<i32>,
) -> Result<GradientReport> {
    let max_deg = degrees.iter().copied().max().unwrap_or(0);
    let top = top.unwrap_or(max_deg + 1);
    if chain.group.is_finite() && top < max_deg + 1 {
        return Err(Error::InvalidArgument(format!(
            "resolution truncated at {top} but degree {max_deg} needs at least {}",
            max_deg + 1
        )));
    }
    let x = standard_resolution(&chain.group, top)?;
    let group = chain.group.to_string();
    let mut rows = Vec::new();
    let last = chain.levels.len() - 1;
    for (i, level) in chain.levels.iter().enumerate() {
        let c = x.coinvariants(level);
        let index = level.index();
        for &j in degrees {
            let h = integer_homology(&c, j);
            for &field in fields {
                let betti = field_betti(&c, j, field)?;
                rows.push(GradientRow {
                    group: group.clone(),
                    j,
                    i,
                    index: index.to_string(),
                    field: field.name(),
                    betti,
                    log_tors: h.log_torsion,
                    betti_per_index: BigRational::new(BigInt::from(betti), BigInt::from(index)).to_string(),
                    log_tors_per_index: h.log_torsion / index as f64,
                    label: if i == last { "last sample".into() } else { "sample".into() },
                });
            }
        }
    }
    rows.sort_by(|a, b| (a.j, a.i, &a.field).cmp(&(b.j, b.i, &b.field)));
    Ok(GradientReport {
        group,
        degrees: degrees.to_vec(),
        fields: fields.iter().map(Field::name).collect(),
        chain: chain.levels.iter().map(|l| l.moduli.clone()).collect(),
        resolution_top: top,
        rows,
        notes: vec![PREFIX_NOTE.into()],
    })
}

/// `path` with its extension replaced, for the JSON companion of a CSV.
pub fn companion(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

pub fn write_gradient(report: &GradientReport, csv_path: &Path) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(csv_path)?;
    w.write_record(GRADIENT_HEADER)?;
    for r in &report.rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    let json = companion(csv_path, "json");
    fs::write(&json, serde_json::to_string_pretty(report)?)?;
    Ok(json)
}

/// Parses `pow2:K` (moduli `1, 2, ..., 2^K`) or a comma list of moduli.
pub fn parse_chain(group: &GroupSpec, s: &str) -> Result<ResidualChain> {
    if let Some(k) = s.strip_prefix("pow2:") {
        let k: u32 = k.parse().map_err(|_| Error::InvalidArgument(format!("bad chain `{s}`")))?;
        return ResidualChain::powers_of_two(group.clone(), k);
    }
    let moduli = parse_list::<u64>(s)?;
    ResidualChain::from_moduli(group.clone(), &moduli)
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::InvalidArgument(format!("bad list entry `{t}`"))))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveRow {
    pub group: String,
    pub j: i32,
    pub i: usize,
    pub d: u64,
    pub index: String,
    pub t: String,
    pub kappa: Option<f64>,
    pub status: String,
    /// `κ² T^{-1} rk_{ZΓ}(X_j) (1 + ln T)`.
    pub bound: Option<f64>,
    /// `log tors H_j(X_Λ) / [Γ:Λ]`.
    pub measured: f64,
    pub holds: Option<bool>,
    pub certificate: Option<String>,
}

pub const CURVE_HEADER: [&str; 12] =
    ["group", "j", "i", "d", "index", "T", "kappa", "status", "bound", "measured", "holds", "certificate"];

/// `κ² T^{-1} r (1 + ln T)`.
pub fn cwr_bound(kappa: f64, t: f64, rank: usize) -> f64 {
    kappa * kappa / t * rank as f64 * (1.0 + t.ln())
}

/// For each modulus `d_i` and each `T`, tries to certify a weak rebuilding of
/// the `Z^n` Koszul coinvariants and compares the measured normalized log
/// torsion with the bound. Certificates are written to `cert_dir` when
/// given and re-read before being referenced.
pub fn cwr_bound_curve(
    n: usize,
    degrees: &[i32],
    t_grid: &[BigRational],
    moduli: &[u64],
    cert_dir: Option<&Path>,
) -> Result<Vec<CurveRow>> {
    let x = koszul_resolution(n)?;
    let group = x.group.to_string();
    let mut rows = Vec::new();
    for (i, &d) in moduli.iter().enumerate() {
        let level = Level::uniform(&x.group, d)?;
        let c = x.coinvariants(&level);
        let index = level.index();
        for t in t_grid {
            let cert = amenable_weak_rebuilding(n, d, Some(t));
            let mut path = None;
            if let (Ok(r), Some(dir)) = (&cert, cert_dir) {
                fs::create_dir_all(dir)?;
                let p = dir.join(format!("cwr-n{n}-d{d}-T{}.json", t.to_string().replace('/', "_")));
                fs::write(&p, serde_json::to_string(&r.certificate.to_json())?)?;
                let back: CertificateJson = serde_json::from_str(&fs::read_to_string(&p)?)?;
                CertifiedRebuilding::from_json(&back)?;
                path = Some(p.display().to_string());
            }
            for &j in degrees {
                let measured = integer_homology(&c, j).log_torsion / index as f64;
                let row = match &cert {
                    Ok(r) => {
                        let kappa = r.certificate.quality.kappa.value;
                        let bound = cwr_bound(kappa, rational_to_f64(t), x.rank(j));
                        CurveRow {
                            group: group.clone(),
                            j,
                            i,
                            d,
                            index: index.to_string(),
                            t: t.to_string(),
                            kappa: Some(kappa),
                            status: "certified".into(),
                            bound: Some(bound),
                            measured,
                            holds: Some(measured <= bound),
                            certificate: path.clone(),
                        }
                    }
                    Err(_) => CurveRow {
                        group: group.clone(),
                        j,
                        i,
                        d,
                        index: index.to_string(),
                        t: t.to_string(),
                        kappa: None,
                        status: "uncertified".into(),
                        bound: None,
                        measured,
                        holds: None,
                        certificate: None,
                    },
                };
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

pub fn write_curve(rows: &[CurveRow], csv_path: &Path) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(csv_path)?;
    w.write_record(CURVE_HEADER)?;
    let opt = |x: Option<f64>| x.map(fmt12).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.group.clone(),
            r.j.to_string(),
            r.i.to_string(),
            r.d.to_string(),
            r.index.clone(),
            r.t.clone(),
            opt(r.kappa),
            r.status.clone(),
            opt(r.bound),
            fmt12(r.measured),
            r.holds.map(|h| h.to_string()).unwrap_or_default(),
            r.certificate.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    let json = companion(csv_path, "json");
    fs::write(&json, serde_json::to_string_pretty(rows)?)?;
    Ok(json)
}

/// Everything the line-complex demo establishes.
#[derive(Clone, Debug)]
pub struct BootstrapReport {
    pub d: u64,
    pub t: BigRational,
    /// Ranks over `Z[Z^2]` of the replaced complex.
    pub replaced_ranks: Vec<usize>,
    pub coinvariant_betti: Vec<usize>,
    pub torsion_free: bool,
    /// Coinvariant homology agrees with that of the Koszul complex of `Z^2`.
    pub matches_koszul: bool,
    pub copies: usize,
    pub lift_norm: BigInt,
    pub certificate: CertifiedRebuilding,
    /// The certificate re-read from its serialized form.
    pub reverified: CertifiedRebuilding,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub d: u64,
    pub t: String,
    pub replaced_ranks: Vec<usize>,
    pub coinvariant_betti: Vec<usize>,
    pub torsion_free: bool,
    pub matches_koszul: bool,
    pub copies: usize,
    pub lift_norm: String,
    pub kappa: f64,
    pub rebuilt_ranks: Vec<usize>,
    pub coinvariant_ranks: Vec<usize>,
    pub certificate: CertificateJson,
}

/// The `Z^2` line complex `Z[Γ/Δ] <-(t_2 - 1)- Z[Γ/Δ]` with `Δ = Z × 0`.
///
/// Both modules are replaced by the induced Koszul resolution of `Z` over
/// `Z[Δ]`; the differential lifts to multiplication by `t_2 - 1` (central,
/// so the lift is exact and needs no homotopy) and its cone is a free
/// replacement with ranks `(1, 2, 1)`. The coinvariants at `(dZ)^2` are then
/// rebuilt: the induced summand splits into `d` circles `S^[0,d]`, each is
/// rebuilt at `(T, 2)`, the pieces are summed, and the cone rule gives the
/// final certificate with `κ = 2 + 2 + ln 3 + ln ||t_2 - 1||`.
pub fn bootstrap_demo(d: u64, t: &BigRational) -> Result<BootstrapReport> {
    if d < 2 {
        return Err(Error::InvalidArgument("the demo needs d >= 2".into()));
    }
    if *t > BigRational::from_integer(BigInt::from(d)) {
        return Err(Error::InvalidArgument(format!("T = {t} exceeds d = {d}")));
    }
    let z2 = GroupSpec::free_abelian(2)?;
    let k1 = koszul_resolution(1)?;
    let p = Arc::new(induce(&k1, &z2, &Embedding::Coordinates(vec![0]))?);
    let mult = GroupRingElement::minus_one(&z2, z2.generator(1));
    let f = EquivariantMap::new(
        p.clone(),
        p.clone(),
        0,
        p.degrees().map(|j| GroupRingMatrix::from_entries(p.rank(j), p.rank(j), vec![(0, 0, mult.clone())])).collect(),
    )?;
    f.check_chain_map()?;
    let replaced: EquivariantComplex = equivariant_cone(&f)?;

    let level = Level::uniform(&z2, d)?;
    let c_lambda = replaced.coinvariants(&level);
    let homology: Vec<_> = (0..=2).map(|j| integer_homology(&c_lambda, j)).collect();
    let coinvariant_betti: Vec<usize> = homology.iter().map(|h| h.betti).collect();
    let torsion_free = homology.iter().all(|h| h.torsion.is_empty());
    let k2 = koszul_resolution(2)?.coinvariants(&level);
    let matches_koszul = (0..=3).all(|j| integer_homology(&k2, j) == integer_homology(&c_lambda, j));

    // coinvariants of the cone are the cone of the coinvariants
    let p_lambda = Arc::new(p.coinvariants(&level));
    let f_lambda = f.coinvariants(&level, p_lambda.clone(), p_lambda.clone())?;
    let direct = cone_complex(&f_lambda);
    if direct.ranks() != c_lambda.ranks() || (0..=2).any(|j| direct.diff(j) != c_lambda.diff(j)) {
        return Err(Error::InvalidComplex("coinvariants of the cone differ from the cone of coinvariants".into()));
    }

    // P_Λ ≅ d copies of S^[0,d]
    let dec = induction_decomposition(&k1, &z2, &[0], &level)?;
    let piece = circle_rebuild(d as usize, t, 2)?;
    let mut sum = piece.clone();
    for _ in 1..dec.copies {
        sum = sum_rebuild(&sum, &piece)?;
    }
    let on_sum = sum.retract.retarget(dec.sum.clone(), sum.retract.xp.clone())?;
    let on_p = precompose_iso(&on_sum, &dec.iso, &dec.iso_inv)?;
    let on_p = on_p.retarget(p_lambda.clone(), on_p.xp.clone())?;
    let rp = check_quality(&on_p, 2, &sum.quality, RebuildKind::Full)?;

    let f_lambda = GradedMap::from_fn(rp.retract.x.clone(), rp.retract.x.clone(), 0, |j| f_lambda.at(j).into_owned())?;
    let certificate = cone_rebuild(&rp, &rp, &f_lambda)?;
    let json = serde_json::to_string(&certificate.to_json())?;
    let reverified = CertifiedRebuilding::from_json(&serde_json::from_str(&json)?)?;
    Ok(BootstrapReport {
        d,
        t: t.clone(),
        replaced_ranks: replaced.ranks(),
        coinvariant_betti,
        torsion_free,
        matches_koszul,
        copies: dec.copies,
        lift_norm: f_lambda.max_norm_upto(2),
        certificate,
        reverified,
    })
}

impl BootstrapReport {
    pub fn summary(&self) -> BootstrapSummary {
        let r = &self.certificate.retract;
        BootstrapSummary {
            d: self.d,
            t: self.t.to_string(),
            replaced_ranks: self.replaced_ranks.clone(),
            coinvariant_betti: self.coinvariant_betti.clone(),
            torsion_free: self.torsion_free,
            matches_koszul: self.matches_koszul,
            copies: self.copies,
            lift_norm: self.lift_norm.to_string(),
            kappa: self.certificate.quality.kappa.value,
            rebuilt_ranks: r.xp.ranks(),
            coinvariant_ranks: r.x.ranks(),
            certificate: self.certificate.to_json(),
        }
    }
}

/// `κ` of the demo: `2 + 2 + ln 3 + ln 2`.
pub fn bootstrap_kappa() -> f64 {
    4.0 + 3f64.ln() + 2f64.ln()
}

/// A quick sanity value used by reports: `Quality` of a certificate as text.
pub fn describe_quality(q: &Quality) -> String {
    match &q.kappa.exact {
        Some(k) => format!("T = {}, κ = {k}", q.t),
        None => format!("T = {}, κ ≈ {}", q.t, fmt12(q.kappa.value)),
    }
}

/// Max rank ratio for the demo's degenerate case check.
pub fn rank_ratio(small: usize, big: usize) -> f64 {
    if big == 0 {
        0.0
    } else {
        small.to_f64().unwrap_or(0.0) / big as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(a))
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt12(0.5), "0.5");
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(0.0), "0");
    }

    #[test]
    fn gradient_for_z() {
        let z = GroupSpec::free_abelian(1).unwrap();
        let chain = ResidualChain::powers_of_two(z, 4).unwrap();
        let r = gradient_experiment(&chain, &[1], &[Field::Rationals], None).unwrap();
        let per: Vec<&str> = r.rows.iter().map(|r| r.betti_per_index.as_str()).collect();
        assert_eq!(per, vec!["1", "1/2", "1/4", "1/8", "1/16"]);
        assert!(r.rows.iter().all(|r| r.log_tors == 0.0));
        assert_eq!(r.rows.last().unwrap().label, "last sample");
    }

    #[test]
    fn gradient_for_cyclic() {
        let g = GroupSpec::cyclic(6).unwrap();
        let chain = ResidualChain::from_moduli(g, &[1, 6, 6]).unwrap();
        let r = gradient_experiment(&chain, &[0, 1, 2], &[Field::Rationals], None).unwrap();
        let row = |j: i32, i: usize| r.rows.iter().find(|r| r.j == j && r.i == i).unwrap().clone();
        assert!((row(1, 0).log_tors - 6f64.ln()).abs() < 1e-12);
        assert_eq!(row(2, 0).log_tors, 0.0);
        assert_eq!(row(1, 1).log_tors, 0.0);
        assert_eq!(row(0, 2).betti, 1);
        assert!(gradient_experiment(&chain, &[3], &[Field::Rationals], Some(3)).is_err());
    }

    #[test]
    fn chain_parsing() {
        let z = GroupSpec::free_abelian(1).unwrap();
        assert_eq!(parse_chain(&z, "pow2:3").unwrap().levels.len(), 4);
        assert_eq!(parse_chain(&z, "1,3,9").unwrap().levels[2].moduli, vec![9]);
        assert!(parse_chain(&z, "1,x").is_err());
    }

    #[test]
    fn curve_point() {
        let rows = cwr_bound_curve(1, &[0], &[q(4), q(8)], &[16], None).unwrap();
        assert_eq!(rows[0].status, "certified");
        assert!((rows[0].bound.unwrap() - 0.25 * (1.0 + 4f64.ln())).abs() < 1e-12);
        assert_eq!(rows[0].holds, Some(true));
        assert_eq!(rows[1].status, "uncertified");
    }

    #[test]
    fn bootstrap_small() {
        let r = bootstrap_demo(4, &q(2)).unwrap();
        assert_eq!(r.replaced_ranks, vec![1, 2, 1]);
        assert_eq!(r.coinvariant_betti, vec![1, 2, 1]);
        assert!(r.torsion_free && r.matches_koszul);
        assert_eq!(r.copies, 4);
        assert!((r.certificate.quality.kappa.value - bootstrap_kappa()).abs() < 1e-9);
        assert!(bootstrap_demo(4, &q(5)).is_err());
    }
}
