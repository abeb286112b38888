mod common;

use std::collections::BTreeMap;

use common::{h, klein, z44};
use hopfforge::abgroup::{enumerate_phi, CharacterIso, GroupElement};
use hopfforge::cyclo::CycloNumber;
use hopfforge::error::Error;
use hopfforge::hd::{build_hd, Datum, HdAlgebra, DEFAULT_MAX_DIM};
use hopfforge::hopf::{Element, TensorElement};
use hopfforge::triangular::{
    analyze, build_f_t, canonical_phi, default_pool, extract_datum, rmatrix_from_f, rmatrix_from_json,
    rmatrix_to_json, sample_choice, sample_sk, sk_parameter_count, validate_choice, verify_triangular, SkSample,
    StructureChoice,
};
use proptest::prelude::*;

fn sweedler_choice(lambda: CycloNumber) -> StructureChoice {
    StructureChoice {
        phi: canonical_phi(h(1).form()),
        m_maps: BTreeMap::from([(GroupElement(vec![1]), vec![vec![lambda]])]),
    }
}

fn r_of(hd: &HdAlgebra, t: &StructureChoice) -> TensorElement {
    rmatrix_from_f(&build_f_t(hd, t).unwrap()).unwrap()
}

#[test]
fn sk_samples() {
    let pool = default_pool();
    for seed in 0..10 {
        match sample_sk(&h(1), seed, &pool).unwrap() {
            SkSample::Maps(m) => {
                let lambda = &m[&GroupElement(vec![1])][0][0];
                assert!(pool.contains(lambda));
            }
            other => panic!("{other:?}"),
        }
    }
    assert_eq!(sample_sk(&h(0), 3, &pool).unwrap(), SkSample::Maps(BTreeMap::new()));
    assert!(matches!(sample_sk(&z44(&[(&[1, 0], 1)]), 0, &pool).unwrap(), SkSample::Empty { .. }));
    assert_eq!(sample_sk(&h(2), 7, &pool).unwrap(), sample_sk(&h(2), 7, &pool).unwrap());
}

#[test]
fn parameter_counts() {
    assert_eq!(sk_parameter_count(&h(0)), Some(0));
    assert_eq!(sk_parameter_count(&h(1)), Some(1));
    assert_eq!(sk_parameter_count(&h(2)), Some(3));
    assert_eq!(sk_parameter_count(&klein(2, 1)), Some(4));
    assert_eq!(sk_parameter_count(&z44(&[(&[0, 1], 2), (&[0, 3], 2)])), Some(4));
    assert_eq!(sk_parameter_count(&z44(&[(&[1, 0], 1)])), None);
}

#[test]
fn choice_validation_rejects_bad_m() {
    let d = h(2);
    let mut t = sample_choice(&d, 0, &default_pool(), 64).unwrap().unwrap();
    assert!(validate_choice(&d, &t).all_pass());
    let one = CycloNumber::one();
    let zero = CycloNumber::zero();
    t.m_maps.insert(GroupElement(vec![1]), vec![vec![one.clone(), one.clone()], vec![zero.clone(), one.clone()]]);
    assert!(!validate_choice(&d, &t).passed("m_invertible_transpose"));
    t.m_maps.insert(GroupElement(vec![1]), vec![vec![one.clone(), one.clone()], vec![one.clone(), one]]);
    assert!(!validate_choice(&d, &t).passed("m_invertible_transpose"));
    let hd = build_hd(&d, DEFAULT_MAX_DIM).unwrap();
    assert!(build_f_t(&hd, &t).is_err());
}

#[test]
fn sweedler_f_t_values() {
    let hd = build_hd(&h(1), DEFAULT_MAX_DIM).unwrap();
    let lambda = CycloNumber::from_integer(-2);
    let f = build_f_t(&hd, &sweedler_choice(lambda.clone())).unwrap();
    let a = hd.hopf();
    let dual_of = |coeffs: &[i64]| {
        Element::from_dense(&coeffs.iter().map(|&c| CycloNumber::from_integer(c)).collect::<Vec<_>>())
    };
    // Labels: 0 = 1, 1 = x, 2 = g, 3 = gx.
    let epsilon = dual_of(&[1, 0, 1, 0]);
    let alpha = dual_of(&[1, 0, -1, 0]);
    let p_x = dual_of(&[0, 1, 0, 1]);
    assert_eq!(f.apply(&epsilon), *a.unit());
    assert_eq!(f.apply(&alpha), Element::basis(2));
    assert_eq!(f.apply(&p_x), Element::term(1, lambda));
}

#[test]
fn sweedler_r_has_eight_terms() {
    let hd = build_hd(&h(1), DEFAULT_MAX_DIM).unwrap();
    for lambda in default_pool() {
        let r = r_of(&hd, &sweedler_choice(lambda));
        assert_eq!(r.len(), 8);
        let group_part = r.keys().filter(|(i, j)| i % 2 == 0 && j % 2 == 0).count();
        assert_eq!(group_part, 4);
        assert!(analyze(hd.hopf(), &r, 32).unwrap().verdicts.all_pass());
    }
}

#[test]
fn distinct_choices_give_distinct_r() {
    let hd = build_hd(&h(1), DEFAULT_MAX_DIM).unwrap();
    let rs: Vec<TensorElement> = default_pool().into_iter().map(|l| r_of(&hd, &sweedler_choice(l))).collect();
    for i in 0..rs.len() {
        for j in 0..i {
            assert_ne!(rs[i], rs[j]);
        }
    }
}

#[test]
fn trivial_r_matrices() {
    let one = TensorElement::tensor(&Element::basis(0), &Element::basis(0));
    let k = build_hd(&h(0), DEFAULT_MAX_DIM).unwrap();
    assert!(verify_triangular(k.hopf(), &one, 32).unwrap().all_pass());

    let s = build_hd(&h(1), DEFAULT_MAX_DIM).unwrap();
    let v = verify_triangular(s.hopf(), &one, 32).unwrap();
    let w = v.get("intertwiner").unwrap();
    assert!(!w.pass);
    assert!(w.witness.as_deref().unwrap().contains("x[1]_1"));
    assert!(v.passed("unitarity") && v.passed("hexagon_left"));
    assert!(matches!(
        extract_datum(s.hopf(), &one, &s.generators(), DEFAULT_MAX_DIM),
        Err(Error::Hypothesis(_))
    ));
}

#[test]
fn hexagon_bound_is_an_error() {
    let hd = build_hd(&z44(&[(&[0, 1], 1), (&[0, 3], 1)]), DEFAULT_MAX_DIM).unwrap();
    let one = TensorElement::tensor(&Element::basis(0), &Element::basis(0));
    assert!(matches!(
        verify_triangular(hd.hopf(), &one, 32),
        Err(Error::BoundExceeded { value: 64, bound: 32, .. })
    ));
}

#[test]
fn rmatrix_json_round_trip() {
    let hd = build_hd(&klein(1, 1), DEFAULT_MAX_DIM).unwrap();
    let t = sample_choice(hd.datum(), 5, &default_pool(), 64).unwrap().unwrap();
    let r = r_of(&hd, &t);
    let v = rmatrix_to_json(&r);
    assert_eq!(rmatrix_from_json(&v, hd.dim()).unwrap(), r);
    assert!(rmatrix_from_json(&v, 4).is_err());
}

#[test]
fn group_algebra_recognizes_as_trivial_datum() {
    let hd = build_hd(&h(0), DEFAULT_MAX_DIM).unwrap();
    let t = sample_choice(hd.datum(), 0, &default_pool(), 64).unwrap().unwrap();
    let e = extract_datum(hd.hopf(), &r_of(&hd, &t), &hd.generators(), DEFAULT_MAX_DIM).unwrap();
    assert!(e.datum.same_as(&h(0)));
    assert_eq!(e.datum.total_generators(), 0);
}

fn check_non_canonical(d: &Datum, phi: &CharacterIso) {
    let hd = build_hd(d, DEFAULT_MAX_DIM).unwrap();
    let mut t = sample_choice(d, 1, &default_pool(), 64).unwrap().unwrap();
    t.phi = phi.clone();
    let e = extract_datum(hd.hopf(), &r_of(&hd, &t), &hd.generators(), DEFAULT_MAX_DIM).unwrap();
    assert!(e.verdicts.all_pass(), "{}", e.verdicts);
    let g = d.group();
    for x in g.elements() {
        assert_eq!(e.datum.n_of(&x), d.n_of(&x));
    }
    for x in d.support() {
        for y in g.elements() {
            assert_eq!(e.datum.form().eval(&x, &y), d.form().eval(&x, &y));
        }
    }
    assert_eq!(e.datum.same_as(d), *phi == canonical_phi(d.form()));
}

#[test]
fn extraction_with_non_canonical_phi() {
    let d = klein(0, 0);
    let phis = enumerate_phi(d.form(), &d.support(), 64).unwrap();
    assert_eq!(phis.len(), 4);
    for phi in &phis {
        check_non_canonical(&d, phi);
    }

    let d = z44(&[(&[0, 1], 1), (&[0, 3], 1)]);
    let canonical = canonical_phi(d.form());
    let phis = enumerate_phi(d.form(), &d.support(), 64).unwrap();
    assert_eq!(phis.len(), 2);
    check_non_canonical(&d, phis.iter().find(|p| **p != canonical).unwrap());
}

fn seeded() -> impl Strategy<Value = (HdAlgebra, u64)> {
    (prop::sample::select(vec![h(1), h(2), h(3), klein(1, 0), klein(1, 1)]), any::<u64>())
        .prop_map(|(d, s)| (build_hd(&d, DEFAULT_MAX_DIM).unwrap(), s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampled_structures_are_minimal_triangular((hd, seed) in seeded()) {
        let t = sample_choice(hd.datum(), seed, &default_pool(), 64).unwrap().unwrap();
        prop_assert!(validate_choice(hd.datum(), &t).all_pass());
        let r = r_of(&hd, &t);
        let a = analyze(hd.hopf(), &r, 32).unwrap();
        prop_assert!(a.verdicts.all_pass(), "{}", a.verdicts);
        prop_assert!(a.minimal);
        prop_assert_eq!(a.rank, hd.dim());
        prop_assert!(!a.s2_is_identity);
        prop_assert!(a.trace_s2.is_zero());
        prop_assert_eq!(hd.hopf().antipode_of(&a.u), a.u);
    }

    #[test]
    fn canonical_round_trip((hd, seed) in seeded()) {
        let mut t = sample_choice(hd.datum(), seed, &default_pool(), 64).unwrap().unwrap();
        t.phi = canonical_phi(hd.datum().form());
        let e = extract_datum(hd.hopf(), &r_of(&hd, &t), &hd.generators(), DEFAULT_MAX_DIM).unwrap();
        prop_assert!(e.datum.same_as(hd.datum()));
        prop_assert_eq!(e.choice, t);
    }
}
