use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::*;
use crate::poset::Order;
use crate::species::Decoration;
use crate::Exec;

fn int(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

fn set(n: usize) -> Shape {
    Shape::new(Order::discrete(n), Decoration::unit())
}

fn plain(order: Order) -> Shape {
    Shape::new(order, Decoration::unit())
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn sets_give_binomial_coefficients() {
    let alg = IncidenceBialgebra::new(&Species::sets(), 5, 1).unwrap();
    for n in 0..=5 {
        let delta = alg.coproduct_shape(&set(n)).unwrap();
        assert_eq!(delta.len(), n + 1);
        for k in 0..=n {
            let c = delta.coeff(&alg.key(&set(k)).unwrap(), &alg.key(&set(n - k)).unwrap());
            assert_eq!(c, int(binomial(n as i64, k as i64)), "n={n} k={k}");
        }
    }
}

#[test]
fn one_edge_graph_splits_two_ways_into_points() {
    let g = Species::graphs();
    let alg = IncidenceBialgebra::new(&g, 2, 1).unwrap();
    let edge = Shape::new(Order::discrete(2), Decoration::new(vec![vec![0, 1, 1, 0]]));
    let (e, p, one) = (
        alg.key(&edge).unwrap(),
        alg.key(&Shape::new(Order::discrete(1), Decoration::new(vec![vec![0]]))).unwrap(),
        alg.unit_key().unwrap(),
    );
    let delta = alg.coproduct_shape(&edge).unwrap();
    assert_eq!(delta.len(), 3);
    assert_eq!(delta.coeff(&e, &one), Coeff::one());
    assert_eq!(delta.coeff(&one, &e), Coeff::one());
    assert_eq!(delta.coeff(&p, &p), int(2));
}

#[test]
fn chain_and_antichain_coproducts() {
    let alg = IncidenceBialgebra::new(&Species::posets(), 2, 1).unwrap();
    let point = alg.key(&plain(Order::chain(1))).unwrap();
    let chain = plain(Order::chain(2));
    let anti = plain(Order::discrete(2));
    assert_eq!(alg.coproduct_shape(&chain).unwrap().coeff(&point, &point), Coeff::one());
    assert_eq!(alg.coproduct_shape(&anti).unwrap().coeff(&point, &point), int(2));
}

#[test]
fn antipode_of_sets_alternates() {
    let alg = IncidenceBialgebra::new(&Species::sets(), 4, 1).unwrap();
    for n in 0..=4 {
        let k = alg.key(&set(n)).unwrap();
        let s = alg.antipode(&ModuleElement::basis(k.clone())).unwrap();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(s, ModuleElement::basis(k).scaled(&int(sign)), "n={n}");
    }
}

#[test]
fn antipode_of_two_chain() {
    let alg = IncidenceBialgebra::new(&Species::posets(), 2, 1).unwrap();
    let chain = alg.key(&plain(Order::chain(2))).unwrap();
    let anti = alg.key(&plain(Order::discrete(2))).unwrap();
    let s = alg.antipode(&ModuleElement::basis(chain.clone())).unwrap();
    let mut expected = ModuleElement::zero();
    expected.add(chain, int(-1));
    expected.add(anti, int(1));
    assert_eq!(s, expected);
}

#[test]
fn antipode_needs_a_monoidal_species() {
    let alg = IncidenceBialgebra::new(&Species::linear_orders(), 2, 1).unwrap();
    let k = alg.key(&plain(Order::chain(2))).unwrap();
    assert!(matches!(alg.antipode(&ModuleElement::basis(k)), Err(CoalgError::Species(SpeciesError::NotMonoidal(_)))));
}

#[test]
fn counit_picks_the_empty_structure() {
    let alg = IncidenceBialgebra::new(&Species::forests(), 2, 1).unwrap();
    let mut x = ModuleElement::basis(alg.unit_key().unwrap()).scaled(&int(3));
    x.add(alg.key(&plain(Order::chain(2))).unwrap(), int(5));
    assert_eq!(alg.counit(&x).unwrap(), int(3));
}

#[test]
fn laws_hold_for_monoidal_builtins() {
    for (s, size) in [
        (Species::sets(), 4),
        (Species::graphs(), 3),
        (Species::posets(), 3),
        (Species::forests(), 3),
        (Species::double_posets(), 2),
        (Species::acyclic_digraphs(), 3),
    ] {
        let alg = IncidenceBialgebra::new(&s, size, 2).unwrap();
        for report in [
            check_coassociativity(&alg, Exec::Parallel).unwrap(),
            check_counit(&alg, Exec::Parallel).unwrap(),
            check_bialgebra(&alg, Exec::Parallel).unwrap(),
            check_antipode(&alg, Exec::Parallel).unwrap(),
        ] {
            assert!(report.passed(), "{} {}: {:?}", s.tag(), report.check, report.first_failure());
        }
    }
}

#[test]
fn linear_orders_are_a_coalgebra() {
    let alg = IncidenceBialgebra::new(&Species::linear_orders(), 4, 1).unwrap();
    assert!(check_coassociativity(&alg, Exec::Sequential).unwrap().passed());
    assert!(check_counit(&alg, Exec::Sequential).unwrap().passed());
    assert!(check_bialgebra(&alg, Exec::Sequential).is_err());
}

#[test]
fn cocommutativity_separates_ordinary_from_directed() {
    let sets = IncidenceBialgebra::new(&Species::graphs(), 3, 1).unwrap();
    assert!(check_cocommutativity(&sets, Exec::Parallel).unwrap().passed());
    let posets = IncidenceBialgebra::new(&Species::posets(), 2, 1).unwrap();
    assert!(check_cocommutativity(&posets, Exec::Parallel).unwrap().passed());
    let posets = IncidenceBialgebra::new(&Species::posets(), 3, 1).unwrap();
    let report = check_cocommutativity(&posets, Exec::Parallel).unwrap();
    // The two three-element posets with a unique extremum on one side only.
    assert_eq!(report.count(crate::decomp::Verdict::Fail), 2);
}

#[test]
fn coefficients_are_fibre_cardinalities() {
    for (s, size) in [(Species::posets(), 3), (Species::graphs(), 2), (Species::sets(), 3), (Species::forests(), 3)] {
        let alg = IncidenceBialgebra::new(&s, size, 1).unwrap();
        let report = cardinality_coproduct_consistency(&alg, Exec::Parallel).unwrap();
        assert!(report.passed(), "{}: {:?}", s.tag(), report.first_failure());
        assert_eq!(report.results.len(), alg.keys().len());
    }
}

#[test]
fn json_round_trip_with_fractions() {
    let alg = IncidenceBialgebra::new(&Species::posets(), 2, 1).unwrap();
    let p = alg.key(&plain(Order::chain(1))).unwrap();
    let mut t = TensorElement::zero();
    t.add(p.clone(), alg.unit_key().unwrap(), Coeff::new(BigInt::from(-3), BigInt::from(6)));
    let text = serde_json::to_string(&t).unwrap();
    assert!(text.contains("\"coeff\":\"-1/2\""), "{text}");
    let back: TensorElement = serde_json::from_str(&text).unwrap();
    assert_eq!(back, t);

    let m = ModuleElement::basis(p);
    let back: ModuleElement = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back, m);
    assert!(serde_json::from_str::<ModuleElement>(r#"{"terms":[{"key":"poset:00","coeff":"x"}]}"#).is_err());
}

#[test]
fn zero_terms_cancel() {
    let mut m = ModuleElement::zero();
    let k = CanonicalKey::new("set", &[1]);
    m.add(k.clone(), int(2));
    m.add(k, int(-2));
    assert!(m.is_zero());
    assert!(ModuleElement::zero().coeff(&CanonicalKey::new("set", &[0])).is_zero());
}
