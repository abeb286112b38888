mod common;

use common::{datum, h, klein, random_datum, small_fixtures, z44};
use hopfforge::abgroup::GroupElement;
use hopfforge::cyclo::CycloNumber;
use hopfforge::error::Error;
use hopfforge::hd::{
    build_hd, validate_datum, Datum, Generators, GeneratorSymbol, HdLayout, Letter, DEFAULT_MAX_DIM,
};
use hopfforge::hopf::{Element, HopfStructure};
use hopfforge::linalg::Subspace;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn g(v: &[u32]) -> Letter {
    Letter::Group(GroupElement(v.to_vec()))
}

fn x(grade: &[u32], index: u32) -> Letter {
    Letter::Symbol(GeneratorSymbol { grade: GroupElement(grade.to_vec()), index })
}

#[test]
fn validation_examples() {
    let r = validate_datum(&h(1));
    assert!(r.is_valid() && r.feasible);
    assert_eq!(r.dimension, Some(4));
    assert_eq!(validate_datum(&h(2)).dimension, Some(8));

    let r = validate_datum(&z44(&[(&[1, 0], 1)]));
    assert!(r.is_valid());
    assert_eq!(r.dimension, Some(32));
    assert!(!r.feasible);
    assert_eq!(r.infeasible_witness, Some(GroupElement(vec![1, 0])));
}

#[test]
fn invalid_data_are_rejected_with_named_invariant() {
    let off_support = datum(&[2, 2], 2, &[&[0, 1], &[1, 0]], &[(&[1, 0], 1)]);
    let r = validate_datum(&off_support);
    assert!(!r.verdicts.passed("n_supported_on_i_f"));
    match build_hd(&off_support, DEFAULT_MAX_DIM) {
        Err(Error::InvalidDatum(m)) => assert!(m.contains("n_supported_on_i_f")),
        other => panic!("{other:?}"),
    }

    let z3 = datum(&[3], 3, &[&[0]], &[]);
    let r = validate_datum(&z3);
    assert!(!r.verdicts.passed("form.non_degeneracy"));
    assert!(matches!(build_hd(&z3, DEFAULT_MAX_DIM), Err(Error::InvalidDatum(_))));
}

#[test]
fn dimension_bound_is_enforced() {
    assert!(matches!(
        build_hd(&h(7), DEFAULT_MAX_DIM),
        Err(Error::BoundExceeded { value: 256, bound: 64, .. })
    ));
    assert!(build_hd(&h(3), 16).is_ok());
    assert!(build_hd(&h(3), 15).is_err());
}

#[test]
fn word_examples() {
    let l = HdLayout::new(&h(1)).unwrap();
    let one = CycloNumber::one();
    let xg = l.normalize_word(&[x(&[1], 1), g(&[1])], &one).unwrap();
    assert_eq!(l.label_name(*xg.keys().next().unwrap()), "g[1]·x[1]_1");
    assert_eq!(xg.iter().next().unwrap().1, &CycloNumber::from_integer(-1));
    assert!(l.normalize_word(&[x(&[1], 1), x(&[1], 1)], &one).unwrap().is_zero());
    assert_eq!(l.normalize_word(&[g(&[1]), g(&[1])], &one).unwrap(), Element::basis(0));

    let l2 = HdLayout::new(&h(2)).unwrap();
    let swapped = l2.normalize_word(&[x(&[1], 2), x(&[1], 1)], &one).unwrap();
    let ordered = l2.normalize_word(&[x(&[1], 1), x(&[1], 2)], &one).unwrap();
    assert_eq!(swapped, ordered.scale(&CycloNumber::from_integer(-1)));
}

#[test]
fn small_algebras() {
    let h0 = build_hd(&h(0), DEFAULT_MAX_DIM).unwrap();
    assert_eq!(h0.dim(), 2);
    assert_eq!(h0.hopf().labels(), ["1", "g[1]"]);
    assert_eq!(h0.projection_and_biproduct().b, Subspace::span(2, [Element::basis(0).to_dense(2)]));

    let sweedler = build_hd(&h(1), DEFAULT_MAX_DIM).unwrap();
    assert_eq!(sweedler.hopf().labels(), ["1", "x[1]_1", "g[1]", "g[1]·x[1]_1"]);

    let h2 = build_hd(&h(2), DEFAULT_MAX_DIM).unwrap();
    assert_eq!(h2.dim(), 8);
    assert_eq!(h2.projection_and_biproduct().b.dim(), 4);
    assert!(h2.verify_relations().all_pass());
}

#[test]
fn structure_of_fixtures() {
    for (name, d) in small_fixtures() {
        let hd = build_hd(&d, DEFAULT_MAX_DIM).unwrap();
        let a = hd.hopf();
        assert!(hd.verify_relations().all_pass(), "{name}");
        let gl = hd.grouplikes();
        assert_eq!(gl.len(), d.group().order());
        assert!(gl.iter().all(|x| a.is_grouplike(x)));
        // No other grouplikes: the grouplike span meets the coradical exactly.
        let c = a.coradical_level1(&gl).unwrap();
        assert_eq!(c.dim(), d.group().order() * (1 + d.total_generators() as usize), "{name}");
        for (s, el) in hd.layout().symbols().iter().zip(hd.symbol_elements()) {
            let p = a
                .skew_primitive_space(a.unit(), &hd.group_element(&s.grade))
                .unwrap();
            assert!(p.contains(&el.to_dense(a.dim())), "{name}: {s}");
        }
    }
}

#[test]
fn label_map_lists_every_basis_element() {
    let hd = build_hd(&klein(1, 1), DEFAULT_MAX_DIM).unwrap();
    let v = hd.label_map_json();
    let s = v.to_string();
    for l in hd.hopf().labels() {
        assert!(s.contains(l.as_str()), "{l}");
    }
}

#[test]
fn datum_file_round_trip() {
    for (_, d) in small_fixtures() {
        let s = serde_json::to_value(&d).unwrap().to_string();
        let back: Datum = serde_json::from_str(&s).unwrap();
        assert!(back.same_as(&d));
        assert_eq!(serde_json::to_value(&back).unwrap().to_string(), s);
    }
    let bad = r#"{"group":{"cyclic_factors":[2]},"form":{"cyclic_factors":[3],"conductor":3,"exponent_matrix":[[0]]},"n":[]}"#;
    assert!(serde_json::from_str::<Datum>(bad).is_err());
}

#[test]
fn generators_round_trip() {
    let hd = build_hd(&klein(2, 1), DEFAULT_MAX_DIM).unwrap();
    let gens = hd.generators();
    let back = Generators::from_json(&gens.to_json()).unwrap();
    assert_eq!(back.grouplikes, gens.grouplikes);
    assert_eq!(back.skew_primitives, gens.skew_primitives);
}

#[test]
fn largest_fixture_builds() {
    let d = z44(&[(&[0, 1], 1), (&[0, 3], 1)]);
    let hd = build_hd(&d, DEFAULT_MAX_DIM).unwrap();
    assert_eq!(hd.dim(), 64);
    assert!(hd.verify_relations().all_pass());
    assert!(hd.projection_and_biproduct().verdicts.all_pass());
}

fn random_word(l: &HdLayout, picks: &[(bool, usize)]) -> Vec<Letter> {
    let elements: Vec<GroupElement> = l.datum().group().elements().collect();
    let symbols = l.symbols();
    picks
        .iter()
        .map(|&(is_group, k)| {
            if is_group || symbols.is_empty() {
                Letter::Group(elements[k % elements.len()].clone())
            } else {
                Letter::Symbol(symbols[k % symbols.len()].clone())
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dimension_law(seed in any::<u64>()) {
        let d = random_datum(seed, 32);
        let hd = build_hd(&d, DEFAULT_MAX_DIM).unwrap();
        prop_assert_eq!(hd.dim(), d.group().order() << d.total_generators());
        prop_assert_eq!(Some(hd.dim() as u128), d.dimension());
        prop_assert!(hd.verify_relations().all_pass());
    }

    #[test]
    fn skew_primitive_dimensions(seed in any::<u64>(), i in 0usize..8, j in 0usize..8) {
        let d = random_datum(seed, 16);
        let hd = build_hd(&d, DEFAULT_MAX_DIM).unwrap();
        let grp = d.group();
        let (a, b) = (grp.element(i % grp.order()), grp.element(j % grp.order()));
        let p = hd.hopf().skew_primitive_space(&hd.group_element(&a), &hd.group_element(&b)).unwrap();
        let expected = usize::from(a != b) + d.n_of(&grp.mul(&grp.inv(&a), &b)) as usize;
        prop_assert_eq!(p.dim(), expected);
    }

    #[test]
    fn rewriting_is_confluent(seed in any::<u64>(), picks in prop::collection::vec((any::<bool>(), 0usize..64), 0..14), order in any::<u64>()) {
        let d = random_datum(seed, 64);
        let l = HdLayout::new(&d).unwrap();
        let w = random_word(&l, &picks);
        let c = CycloNumber::root_of_unity(4, (seed % 4) as i64);
        let mut rng = ChaCha8Rng::seed_from_u64(order);
        prop_assert_eq!(l.normalize_word(&w, &c).unwrap(), l.rewrite_word(&w, &c, &mut rng).unwrap());
    }

    #[test]
    fn words_multiply_like_the_table(seed in any::<u64>(), p in prop::collection::vec((any::<bool>(), 0usize..64), 0..6), q in prop::collection::vec((any::<bool>(), 0usize..64), 0..6)) {
        let d = random_datum(seed, 32);
        let hd = build_hd(&d, DEFAULT_MAX_DIM).unwrap();
        let l = hd.layout();
        let (u, v) = (random_word(l, &p), random_word(l, &q));
        let one = CycloNumber::one();
        let joined: Vec<Letter> = u.iter().chain(&v).cloned().collect();
        let a: &HopfStructure = hd.hopf();
        prop_assert_eq!(
            l.normalize_word(&joined, &one).unwrap(),
            a.mul(&l.normalize_word(&u, &one).unwrap(), &l.normalize_word(&v, &one).unwrap())
        );
    }
}
