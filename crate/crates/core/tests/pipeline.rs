use chainrebuild::equivariant::{GroupSpec, ResidualChain};
use chainrebuild::folner::amenable_weak_rebuilding;
use chainrebuild::homology::Field;
use chainrebuild::pipeline::{bootstrap_demo, cwr_bound_curve, gradient_experiment, parse_chain, write_gradient};
use chainrebuild::rebuild::{parse_rational, CertifiedRebuilding};
use num_bigint::BigInt;
use num_rational::BigRational;

fn row<'a>(
    report: &'a chainrebuild::pipeline::GradientReport,
    j: i32,
    i: usize,
    field: &str,
) -> &'a chainrebuild::pipeline::GradientRow {
    report.rows.iter().find(|r| r.j == j && r.i == i && r.field == field).expect("row present")
}

#[test]
fn free_abelian_gradients_decay_like_the_index() {
    let chain = ResidualChain::powers_of_two(GroupSpec::free_abelian(2).unwrap(), 2).unwrap();
    let report = gradient_experiment(&chain, &[0, 1, 2], &[Field::Rationals, Field::Prime(2)], None).unwrap();
    // coinvariants at (2^i Z)^2 compute the torus: betti (1, 2, 1), no torsion
    for i in 0..=2 {
        for (j, b) in [(0, 1), (1, 2), (2, 1)] {
            for f in ["Q", "F2"] {
                let r = row(&report, j, i, f);
                assert_eq!(r.betti, b);
                assert_eq!(r.log_tors, 0.0);
            }
        }
    }
    assert_eq!(row(&report, 1, 2, "Q").betti_per_index, "1/8");
}

#[test]
fn cyclic_group_homology_has_torsion_in_odd_degrees() {
    let group = GroupSpec::cyclic(6).unwrap();
    let chain = parse_chain(&group, "1,6").unwrap();
    let report = gradient_experiment(&chain, &[0, 1, 2], &[Field::Rationals, Field::Prime(2), Field::Prime(3)], None)
        .unwrap();
    let h1 = row(&report, 1, 0, "Q");
    assert_eq!(h1.betti, 0);
    assert!((h1.log_tors - 6f64.ln()).abs() < 1e-12);
    // H_2(Z/6) = 0 but Tor(H_1, F_p) is seen over F_2 and F_3
    assert_eq!(row(&report, 2, 0, "Q").betti, 0);
    assert_eq!(row(&report, 2, 0, "F2").betti, 1);
    assert_eq!(row(&report, 2, 0, "F3").betti, 1);
    // at the trivial subgroup the resolution is acyclic above degree 0
    assert_eq!(row(&report, 1, 1, "F2").betti, 0);
    assert_eq!(row(&report, 0, 1, "Q").betti, 1);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z6.csv");
    let json = write_gradient(&report, &csv).unwrap();
    let back: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(back["rows"].as_array().unwrap().len(), report.rows.len());
}

#[test]
fn torsion_bound_curve_holds_where_certified() {
    let grid: Vec<BigRational> = ["2", "3", "4"].iter().map(|s| parse_rational(s).unwrap()).collect();
    let dir = tempfile::tempdir().unwrap();
    let rows = cwr_bound_curve(1, &[0], &grid, &[16, 32], Some(dir.path())).unwrap();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert_eq!(r.status, "certified", "d={} T={}", r.d, r.t);
        assert_eq!(r.holds, Some(true));
        let path = r.certificate.as_ref().expect("certificate written");
        let json = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        CertifiedRebuilding::from_json(&json).unwrap();
    }
}

#[test]
fn amenable_rebuilding_of_the_line() {
    for d in [4u64, 8, 16, 32] {
        let r = amenable_weak_rebuilding(1, d, None).unwrap();
        assert_eq!(r.t_max, BigRational::new(BigInt::from(d), BigInt::from(4)));
        assert_eq!(r.y_plus_ranks, vec![3, 4]);
    }
}

#[test]
fn bootstrap_demo_reverifies() {
    let report = bootstrap_demo(4, &parse_rational("2").unwrap()).unwrap();
    let s = report.summary();
    assert_eq!(s.replaced_ranks, vec![1, 2, 1]);
    assert_eq!(s.coinvariant_betti, vec![1, 2, 1]);
    assert!(s.torsion_free && s.matches_koszul);
    assert!((s.kappa - 5.79175946923).abs() < 1e-9);
    assert!(bootstrap_demo(1, &parse_rational("2").unwrap()).is_err());
}
