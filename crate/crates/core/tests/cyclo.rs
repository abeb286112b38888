use hopfforge::cyclo::CycloNumber;
use hopfforge::linalg::Matrix;
use proptest::prelude::*;

fn arb_cyclo() -> impl Strategy<Value = CycloNumber> {
    (prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8, 9, 12]), prop::collection::vec((-5i64..=5, 1i64..=4), 12))
        .prop_map(|(n, cs)| {
            cs.into_iter()
                .take(n as usize)
                .enumerate()
                .map(|(k, (p, q))| &CycloNumber::from_fraction(p, q).unwrap() * &CycloNumber::root_of_unity(n, k as i64))
                .sum()
        })
}

#[test]
fn named_values() {
    assert_eq!(CycloNumber::root_of_unity(2, 1), CycloNumber::from_integer(-1));
    assert!(CycloNumber::root_of_unity(1, 0).is_one());
    let i = CycloNumber::root_of_unity(4, 1);
    assert_eq!(&i * &i, CycloNumber::from_integer(-1));
    assert!((&i * &CycloNumber::root_of_unity(4, 3)).is_one());
    let w = CycloNumber::root_of_unity(3, 1);
    assert!((&(&CycloNumber::one() + &w) + &(&w * &w)).is_zero());
    for n in [3u32, 5, 8, 12] {
        for k in 0..n as i64 {
            assert_eq!(CycloNumber::root_of_unity(n, k).conj(), CycloNumber::root_of_unity(n, n as i64 - k));
        }
    }
}

#[test]
fn mixed_conductors_compare_exactly() {
    // ζ_8² = ζ_4 and ζ_12³ = ζ_4.
    assert_eq!(CycloNumber::root_of_unity(8, 2), CycloNumber::root_of_unity(4, 1));
    assert_eq!(CycloNumber::root_of_unity(12, 3), CycloNumber::root_of_unity(4, 1));
    let s = &CycloNumber::root_of_unity(8, 1) + &CycloNumber::root_of_unity(8, 7);
    assert_eq!(&s * &s, CycloNumber::from_integer(2));
}

#[test]
fn vandermonde_over_cube_roots_is_invertible() {
    let w = |k| CycloNumber::root_of_unity(3, k);
    let m = Matrix::from_rows((0..3).map(|i| (0..3).map(|j| w(i * j)).collect()).collect()).unwrap();
    let inv = m.inverse().unwrap();
    assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
    assert_eq!(m.rank(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
            prop_assert_eq!(b.checked_div(&a).unwrap(), &b * &inv);
        }
    }

    #[test]
    fn galois_conjugation_is_a_ring_map(a in arb_cyclo(), b in arb_cyclo()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn serde_is_exact(a in arb_cyclo()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: CycloNumber = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }
}
