//! Command-line front end. Exit codes: 0 on success, 1 when a verification
//! fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::Value;

use crate::equivariant::{EquivariantComplex, EquivariantJson, GroupSpec};
use crate::error::{Error, Result};
use crate::folner::amenable_weak_rebuilding;
use crate::homology::{integer_homology, Field};
use crate::pipeline::{
    bootstrap_demo, cwr_bound_curve, describe_quality, fmt12, gradient_experiment, parse_chain, parse_list,
    write_curve, write_gradient,
};
use crate::random::{identity_suite, Limits};
use crate::rebuild::{circle_rebuild, parse_rational, CertificateJson, CertifiedRebuilding, LedgerEntry};
use crate::zchain::{BasedComplex, ComplexJson};

#[derive(Parser, Debug)]
#[command(name = "chainrebuild", version, about = "Exact chain complexes, rebuildings and homology gradients")]
struct Cli {
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Checks a complex, equivariant complex or certificate JSON file.
    Verify { path: PathBuf },
    /// Certifies the circle S^[0,d] at quality (T, 2) and prints the ledger.
    Circle {
        #[arg(long)]
        d: usize,
        #[arg(long = "T", value_parser = parse_rational)]
        t: BigRational,
        #[arg(long, default_value_t = 1)]
        n: i32,
        /// Writes the certificate JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Betti numbers and log torsion of coinvariants along a residual chain.
    Gradient {
        #[arg(long)]
        group: String,
        /// `pow2:K` or a comma list of moduli starting at 1.
        #[arg(long)]
        chain: String,
        #[arg(long, default_value = "0,1")]
        degrees: String,
        #[arg(long, default_value = "Q")]
        fields: String,
        #[arg(long)]
        out: PathBuf,
        /// Truncation degree of periodic resolutions.
        #[arg(long)]
        top: Option<i32>,
    },
    /// Torsion bound curve from amenable weak rebuildings of Z^n.
    CwrCurve {
        #[arg(long, default_value = "Z")]
        group: String,
        #[arg(long, default_value = "0")]
        degrees: String,
        /// Comma list of T values.
        #[arg(long = "T")]
        t: String,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        cert_dir: Option<PathBuf>,
    },
    /// The Z^2 line complex, its free replacement and a certified rebuilding.
    BootstrapDemo {
        #[arg(long)]
        d: u64,
        #[arg(long = "T", value_parser = parse_rational)]
        t: BigRational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weak rebuilding of the Koszul coinvariants of Z^n at (dZ)^n.
    Amenable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long = "T", value_parser = parse_rational)]
        t: Option<BigRational>,
    },
    /// Randomized exact identity checks.
    Selftest {
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

/// Exit status for an error: input and usage problems are 2, failed checks 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Unsupported(_) | Error::NotPrime(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { path } => verify(&path),
        Command::Circle { d, t, n, out } => {
            let cert = circle_rebuild(d, &t, n)?;
            println!("circle S^[0,{d}]: {} {n}-rebuilding, {}", cert.kind, describe_quality(&cert.quality));
            println!("ranks {:?} -> {:?}", cert.retract.x.ranks(), cert.retract.xp.ranks());
            print_ledger(&cert.ledger);
            if let Some(out) = out {
                fs::write(&out, serde_json::to_string_pretty(&cert.to_json())?)?;
                println!("certificate written to {}", out.display());
            }
            Ok(0)
        }
        Command::Gradient { group, chain, degrees, fields, out, top } => {
            let group = GroupSpec::parse(&group)?;
            let chain = parse_chain(&group, &chain)?;
            let degrees = parse_list::<i32>(&degrees)?;
            let fields = fields.split(',').map(Field::parse).collect::<Result<Vec<_>>>()?;
            let report = gradient_experiment(&chain, &degrees, &fields, top)?;
            let json = write_gradient(&report, &out)?;
            for r in &report.rows {
                println!(
                    "{} j={} i={} index={} {} betti={} log_tors={} per_index={} ({})",
                    r.group,
                    r.j,
                    r.i,
                    r.index,
                    r.field,
                    r.betti,
                    fmt12(r.log_tors),
                    r.betti_per_index,
                    r.label
                );
            }
            println!("wrote {} and {}", out.display(), json.display());
            Ok(0)
        }
        Command::CwrCurve { group, degrees, t, chain, out, cert_dir } => {
            let n = match GroupSpec::parse(&group)? {
                GroupSpec::FreeAbelian { rank } => rank,
                g => return Err(Error::Unsupported(format!("torsion bound curves need Z^n, got {g}"))),
            };
            let degrees = parse_list::<i32>(&degrees)?;
            let grid = t
                .split(',')
                .map(|s| parse_rational(s.trim()).map_err(Error::InvalidArgument))
                .collect::<Result<Vec<_>>>()?;
            let chain = parse_chain(&GroupSpec::FreeAbelian { rank: n }, &chain)?;
            let moduli: Vec<u64> = chain.levels.iter().map(|l| l.moduli[0]).collect();
            let rows = cwr_bound_curve(n, &degrees, &grid, &moduli, cert_dir.as_deref())?;
            let json = write_curve(&rows, &out)?;
            let mut violated = false;
            for r in &rows {
                let bound = r.bound.map(fmt12).unwrap_or_else(|| "-".into());
                println!("d={} T={} j={} {} bound={} measured={}", r.d, r.t, r.j, r.status, bound, fmt12(r.measured));
                violated |= r.holds == Some(false);
            }
            println!("wrote {} and {}", out.display(), json.display());
            Ok(if violated { 1 } else { 0 })
        }
        Command::BootstrapDemo { d, t, out } => {
            let report = bootstrap_demo(d, &t)?;
            let s = report.summary();
            println!("replaced ranks over Z[Z^2]: {:?}", s.replaced_ranks);
            println!("coinvariant betti at (dZ)^2: {:?}, torsion free: {}", s.coinvariant_betti, s.torsion_free);
            println!("matches Koszul(2): {}, circle copies: {}", s.matches_koszul, s.copies);
            println!("ranks {:?} -> {:?}", s.coinvariant_ranks, s.rebuilt_ranks);
            println!("certificate: {} {}-rebuilding, {}", report.certificate.kind, report.certificate.n, describe_quality(&report.certificate.quality));
            println!("re-verified from JSON: ok");
            if let Some(out) = out {
                fs::write(&out, serde_json::to_string_pretty(&s)?)?;
                println!("report written to {}", out.display());
            }
            Ok(0)
        }
        Command::Amenable { n, d, t } => {
            let r = amenable_weak_rebuilding(n, d, t.as_ref())?;
            println!("Z^{n}, box side {d}: T' = {}, certified {}", r.t_max, describe_quality(&r.certificate.quality));
            println!("interior ranks {:?}, Y+ ranks {:?}", r.interior_ranks, r.y_plus_ranks);
            let fr: Vec<String> = r.boundary_fractions.iter().map(|f| f.to_string()).collect();
            println!("boundary fractions {}", fr.join(", "));
            print_ledger(&r.certificate.ledger);
            Ok(0)
        }
        Command::Selftest { cases } => {
            let rep = identity_suite(cli.seed, cases, &Limits::default());
            for (k, what, msg) in &rep.failures {
                println!("case {k}: {what}: {msg}");
            }
            println!("{} cases, {} failures (seed {})", rep.cases, rep.failures.len(), cli.seed);
            Ok(if rep.passed() { 0 } else { 1 })
        }
    }
}

fn print_ledger(ledger: &[LedgerEntry]) {
    for e in ledger {
        println!("  deg {:>2}  {:<24} {} <= {}  {:?}", e.degree, e.inequality, e.lhs, e.rhs, e.status);
    }
}

fn verify(path: &std::path::Path) -> Result<i32> {
    let text = fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidArgument(format!("{}: expected a JSON object", path.display())))?;
    if obj.contains_key("ledger") {
        let json: CertificateJson = serde_json::from_value(value)?;
        let cert = CertifiedRebuilding::from_json(&json)?;
        println!("certificate ok: {} {}-rebuilding, {}", cert.kind, cert.n, describe_quality(&cert.quality));
        print_ledger(&cert.ledger);
        return Ok(0);
    }
    if obj.contains_key("group") {
        let json: EquivariantJson = serde_json::from_value(value)?;
        let x = EquivariantComplex::from_json(&json)?;
        println!("equivariant complex over {} ok, ranks {:?}", x.group, x.ranks());
        return Ok(0);
    }
    let json: ComplexJson = serde_json::from_value(value)?;
    let x = match BasedComplex::from_json(&json) {
        Ok(x) => x,
        Err(Error::InvalidComplex(report)) => {
            println!("invalid complex:");
            for line in report.split("; ") {
                println!("  {line}");
            }
            return Ok(1);
        }
        Err(e) => return Err(e),
    };
    println!("complex ok, degrees {}..={}, ranks {:?}", x.lo(), x.hi(), x.ranks());
    for j in x.degrees() {
        let h = integer_homology(&x, j);
        let tors: Vec<String> = h.torsion.iter().map(|t| t.to_string()).collect();
        println!("  H_{j}: betti {}, torsion [{}]", h.betti, tors.join(", "));
    }
    Ok(0)
}
