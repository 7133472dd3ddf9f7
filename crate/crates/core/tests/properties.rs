use chainrebuild::homology::{field_betti, integer_homology, smith_normal_form, Field};
use chainrebuild::matrix::IntMatrix;
use chainrebuild::random::{identity_case, random_complex, rng, Limits};
use chainrebuild::rebuild::{circle_rebuild, CertifiedRebuilding, Status};
use chainrebuild::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(proptest::collection::vec(-bound..=bound, cols), rows)
        .prop_map(move |data| IntMatrix::from_rows(rows, cols, &data))
}

fn chain_of_three() -> impl Strategy<Value = (IntMatrix, IntMatrix, IntMatrix)> {
    (1usize..5, 1usize..5, 1usize..5, 1usize..5).prop_flat_map(|(a, b, c, d)| {
        // entries near 2^40 push products past i64 and through the fallback
        let big = 1i64 << 40;
        (matrix(a, b, big), matrix(b, c, 7), matrix(c, d, big))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_identities_hold(seed in any::<u64>()) {
        let mut r = rng(seed);
        if let Err((what, e)) = identity_case(&mut r, &Limits::default()) {
            prop_assert!(false, "{what}: {e}");
        }
    }

    #[test]
    fn product_is_associative((a, b, c) in chain_of_three()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn combination_matches_explicit_sum((a, b, c) in chain_of_three(), shift in -3i64..=3) {
        let ab = a.mul(&b);
        prop_assert!(IntMatrix::combination_is_zero(&[(1, &a, &b)], &[(-1, &ab)], 0));
        let abc = ab.mul(&c);
        let bc = b.mul(&c);
        prop_assert!(IntMatrix::combination_is_zero(&[(2, &ab, &c), (-1, &a, &bc)], &[(-1, &abc)], 0));
        if shift != 0 && ab.rows() > 0 && ab.cols() > 0 {
            let off = ab.add(&IntMatrix::from_triplets(ab.rows(), ab.cols(), [(0, 0, BigInt::from(shift))]));
            prop_assert!(!IntMatrix::combination_is_zero(&[(1, &a, &b)], &[(-1, &off)], 0));
        }
    }

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(a in (1usize..6, 1usize..6).prop_flat_map(|(m, n)| matrix(m, n, 9))) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s.clone());
        for w in snf.factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(snf.factors.iter().all(|f| f.is_positive()));
    }

    #[test]
    fn rational_betti_is_integral_betti(seed in any::<u64>()) {
        let x = random_complex(&mut rng(seed), &Limits::default());
        for j in x.degrees() {
            let h = integer_homology(&x, j);
            prop_assert_eq!(field_betti(&x, j, Field::Rationals).unwrap(), h.betti);
            // F_p sees the torsion of H_j and of H_{j-1}
            let p = 2;
            let bp = field_betti(&x, j, Field::Prime(p)).unwrap();
            let tors_here = h.torsion.iter().filter(|t| t.is_even()).count();
            let tors_below = integer_homology(&x, j - 1).torsion.iter().filter(|t| t.is_even()).count();
            prop_assert_eq!(bp, h.betti + tors_here + tors_below);
        }
    }

    #[test]
    fn circle_certificates_respect_their_ledger(d in 2usize..48, p in 2i64..96, q in 1i64..4) {
        let t = BigRational::new(BigInt::from(p), BigInt::from(q));
        if t > BigRational::from_integer(BigInt::from(d)) {
            prop_assert!(circle_rebuild(d, &t, 1).is_err());
            return Ok(());
        }
        match circle_rebuild(d, &t, 1) {
            Ok(cert) => {
                prop_assert!(cert.ledger.iter().all(|e| e.status == Status::Pass));
                for j in 0..=1 {
                    let lhs = BigRational::from_integer(BigInt::from(cert.retract.xp.rank(j))) * &t;
                    prop_assert!(lhs <= BigRational::from_integer(BigInt::from(2 * d)));
                }
                let back = CertifiedRebuilding::from_json(&cert.to_json()).unwrap();
                prop_assert_eq!(back.retract.xp.ranks(), cert.retract.xp.ranks());
            }
            // only a chunking with lengths in [T/2, T] can be missing
            Err(Error::InvalidArgument(msg)) => prop_assert!(msg.contains("cut") || msg.contains("chunk"), "{}", msg),
            Err(e) => prop_assert!(false, "d={} T={}: {}", d, t, e),
        }
    }
}

#[test]
fn torsion_of_a_cyclic_cone() {
    // Z --m--> Z has H_0 = Z/m
    for m in 2..20i64 {
        let x = chainrebuild::zchain::BasedComplex::from_diffs(0, &[1, 1], vec![IntMatrix::from_rows(1, 1, &[vec![m]])], "c")
            .unwrap();
        let h = integer_homology(&x, 0);
        assert_eq!(h.betti, 0);
        assert_eq!(h.torsion, vec![BigInt::from(m)]);
        assert!(integer_homology(&x, 1).torsion.is_empty());
        assert!((h.log_torsion - (m as f64).ln()).abs() < 1e-12);
    }
}
