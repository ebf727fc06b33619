use std::collections::BTreeMap;

use super::builtin::is_forest;
use super::*;
use crate::poset::permutations;

fn graph(json: &str) -> Structure {
    Species::graphs().parse_structure_str(json).unwrap()
}

fn class_count(g: &FinGroupoid) -> usize {
    g.class_count()
}

#[test]
fn graph_restriction_drops_edges() {
    let s = Species::graphs();
    let x = graph(r#"{"vertices":["a","b","c"],"edges":[["a","b"]]}"#);
    let y = s.restrict(&x, &["a", "c"]).unwrap();
    assert_eq!(y.carrier().labels(), ["a", "c"]);
    assert_eq!(y.decoration().matrices()[0], vec![0; 4]);
    assert_eq!(s.restrict(&x, &["a", "b", "c"]).unwrap(), x);
}

#[test]
fn forest_restriction_to_root() {
    let s = Species::forests();
    let t = s.parse_structure_str(r#"{"nodes":["leaf","root"],"parent":{"leaf":"root","root":null}}"#).unwrap();
    assert!(t.carrier().leq("leaf", "root").unwrap());
    let r = s.restrict(&t, &["root"]).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(s.structure_key(&r).unwrap(), s.key(&Shape::new(Order::discrete(1), Decoration::unit())).unwrap());
}

#[test]
fn directed_restriction_reports_convexity_violation() {
    let s = Species::posets();
    let x = s.parse_structure_str(r#"{"elements":["a","b","c"],"leq":[["a","b"],["b","c"]]}"#).unwrap();
    let err = s.restrict(&x, &["a", "c"]).unwrap_err();
    assert_eq!(err, SpeciesError::NotConvex { low: "a".into(), mid: "b".into(), high: "c".into() });
}

#[test]
fn enumeration_examples() {
    let chain2 = FinPoset::chain(&["a", "b"]).unwrap();
    let anti2 = FinPoset::discrete(&["a", "b"]).unwrap();
    let g = Species::posets().enumerate_structures(&chain2, 0).unwrap();
    assert_eq!((g.object_count(), g.automorphisms(0).len()), (1, 1));
    let g = Species::posets().enumerate_structures(&anti2, 0).unwrap();
    assert_eq!((g.object_count(), g.automorphisms(0).len()), (1, 2));
    // Loops count as edges: no edge, one loop, one edge.
    let g = Species::graphs().enumerate_structures(&anti2, 1).unwrap();
    assert_eq!(class_count(&g), 3);
    let g = Species::forests().enumerate_structures(&anti2, 0).unwrap();
    assert_eq!(g.object_count(), 1);
    let g = Species::double_posets().enumerate_structures(&anti2, 0).unwrap();
    assert_eq!((g.object_count(), class_count(&g)), (3, 2));
    let g = Species::acyclic_digraphs().enumerate_structures(&chain2, 0).unwrap();
    assert_eq!(g.object_count(), 1);
    for s in Species::builtins() {
        for n in 0..=3 {
            for o in Order::all_unlabeled(n) {
                s.enumerate_structures(&FinPoset::numbered(o), 2).unwrap().validate().unwrap();
            }
        }
    }
}

#[test]
fn embedding_ordinary_species() {
    let chain2 = FinPoset::chain(&["a", "b"]).unwrap();
    let e = Species::graphs().embed_ordinary().unwrap();
    assert_eq!(e.kind(), SpeciesKind::Directed);
    assert_eq!(e.enumerate_structures(&chain2, 2).unwrap().object_count(), 0);
    let sets = Species::sets().embed_ordinary().unwrap();
    for n in 0..=4 {
        for o in Order::all_labeled(n) {
            assert_eq!(sets.def().supports(&o), o.is_discrete());
        }
    }
    let x = graph(r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"],["c","c"]]}"#);
    for keep in [vec![0], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
        assert_eq!(
            e.restrict_shape(&x.shape(), &keep).unwrap(),
            Species::graphs().restrict_shape(&x.shape(), &keep).unwrap()
        );
    }
    assert!(Species::posets().embed_ordinary().is_err());
}

#[test]
fn product_examples() {
    let s = Species::graphs();
    let pt = graph(r#"{"vertices":["v"]}"#);
    let two = s.product_structure(&pt, &pt).unwrap();
    assert_eq!(two.carrier().labels(), ["L.v", "R.v"]);
    assert_eq!(s.structure_key(&two).unwrap(), s.structure_key(&graph(r#"{"vertices":["a","b"]}"#)).unwrap());
    let x = graph(r#"{"vertices":["a","b"],"edges":[["a","b"],["a","a"]]}"#);
    let u = s.product_structure(&x, &s.empty_structure()).unwrap();
    assert_eq!(s.structure_key(&u).unwrap(), s.structure_key(&x).unwrap());
    assert!(Species::linear_orders()
        .product_structure(&Species::linear_orders().empty_structure(), &Species::linear_orders().empty_structure())
        .is_err());
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

#[test]
fn presheaf_laws() {
    for s in Species::builtins() {
        let max = if s.tag() == "double_poset" { 3 } else { 4 };
        for (_, x) in s.basis_up_to(max, 2).unwrap() {
            let n = x.len();
            assert_eq!(s.restrict_shape(&x, &(0..n).collect::<Vec<_>>()).unwrap(), x);
            for k in subsets(n).into_iter().filter(|k| x.order().is_convex(k)) {
                let xk = s.restrict_shape(&x, &k).unwrap();
                s.validate_shape(&xk).unwrap();
                for jpos in subsets(k.len()).into_iter().filter(|j| xk.order().is_convex(j)) {
                    let j: Vec<usize> = jpos.iter().map(|&p| k[p]).collect();
                    assert_eq!(s.restrict_shape(&xk, &jpos).unwrap(), s.restrict_shape(&x, &j).unwrap());
                }
            }
        }
    }
}

#[test]
fn transport_commutes_with_restriction() {
    for s in Species::builtins() {
        for n in 0..=3 {
            let perms = permutations(n);
            for x in s.shapes(n, 2) {
                for p in &perms {
                    let y = s.transport_shape(&x, p);
                    s.validate_shape(&y).unwrap();
                    assert_eq!(s.key(&y).unwrap(), s.key(&x).unwrap());
                    for k in subsets(n).into_iter().filter(|k| x.order().is_convex(k)) {
                        let mut image: Vec<usize> = k.iter().map(|&i| p[i]).collect();
                        image.sort_unstable();
                        // The restricted bijection, in positions of `k` and `image`.
                        let sub: Vec<usize> = k.iter().map(|&i| image.binary_search(&p[i]).unwrap()).collect();
                        let lhs = s.restrict_shape(&y, &image).unwrap();
                        let rhs = s.transport_shape(&s.restrict_shape(&x, &k).unwrap(), &sub);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn automorphism_orders_divide_carrier_orders() {
    for s in Species::builtins() {
        for n in 0..=3 {
            for o in Order::all_unlabeled(n) {
                let g = s.enumerate_structures(&FinPoset::numbered(o.clone()), 2).unwrap();
                let carrier_auts = o.relational().automorphism_count() as usize;
                for (rep, aut) in g.iso_classes() {
                    let orbit = (0..g.object_count()).filter(|&y| g.class_of(y) == g.class_of(rep)).count();
                    assert_eq!(orbit * aut, carrier_auts);
                }
            }
        }
    }
}

#[test]
fn forest_recognition_matches_single_parent_oracle() {
    for n in 0..=6 {
        for o in Order::all_unlabeled(n) {
            let single_parent = (0..n).all(|x| o.covers().iter().filter(|&&(a, _)| a == x).count() <= 1);
            assert_eq!(is_forest(&o), single_parent);
        }
    }
}

#[test]
fn basis_counts() {
    let counts = |s: Species, max: usize, bound: usize| -> Vec<usize> {
        (0..=max).map(|n| s.basis(n, bound).unwrap().len()).collect()
    };
    assert_eq!(counts(Species::posets(), 4, 0), [1, 1, 2, 5, 16]);
    // Rooted forests on n nodes.
    assert_eq!(counts(Species::forests(), 5, 0), [1, 1, 2, 4, 9, 20]);
    assert_eq!(counts(Species::sets(), 4, 0), [1, 1, 1, 1, 1]);
    assert_eq!(counts(Species::linear_orders(), 4, 0), [1, 1, 1, 1, 1]);
    // Two vertices, at most one edge: empty, loop, edge.
    assert_eq!(counts(Species::graphs(), 2, 1), [1, 2, 3]);
    // Three-element posets carry one DAG each, except the 3-chain (two).
    assert_eq!(counts(Species::acyclic_digraphs(), 3, 0), [1, 1, 2, 6]);
    // Second orders on an antichain of two, up to swapping: 2; on a 2-chain: 3.
    assert_eq!(counts(Species::double_posets(), 2, 0), [1, 1, 5]);
}

#[test]
fn json_round_trips() {
    let cases = [
        (Species::sets(), r#"{"elements":["a","b"]}"#),
        (Species::posets(), r#"{"elements":["a","b","c"],"leq":[["a","b"],["a","c"]]}"#),
        (Species::graphs(), r#"{"vertices":["a","b"],"edges":[["a","b"],["a","b"],["b","b"]]}"#),
        (Species::forests(), r#"{"nodes":["x","y","r"],"parent":{"x":"r","y":"r","r":null}}"#),
        (Species::double_posets(), r#"{"elements":["a","b"],"leq":[["a","b"]],"leq2":[["b","a"]]}"#),
        (Species::acyclic_digraphs(), r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"],["a","c"]]}"#),
        (Species::linear_orders(), r#"{"elements":["a","b"],"leq":[["a","b"]]}"#),
    ];
    for (s, text) in cases {
        let x = s.parse_structure_str(text).unwrap();
        let back = s.parse_structure(&s.structure_to_json(&x)).unwrap();
        assert_eq!(back, x, "{}", s.tag());
    }
}

#[test]
fn json_rejections() {
    assert!(matches!(Species::sets().parse_structure_str("[1]"), Err(SpeciesError::Json(_))));
    let bad_forest = r#"{"nodes":["a","b","c"],"parent":{"a":"b"},"extra":1}"#;
    assert!(Species::forests().parse_structure_str(bad_forest).is_ok());
    let not_forest = r#"{"elements":["a","b","c"],"leq":[["a","b"],["a","c"]]}"#;
    let p = Species::posets().parse_structure_str(not_forest).unwrap();
    assert!(Species::forests().structure(p.carrier().clone(), Decoration::unit()).is_err());
    assert!(Species::linear_orders().parse_structure_str(r#"{"elements":["a","b"]}"#).is_err());
    assert!(matches!(
        Species::acyclic_digraphs().parse_structure_str(r#"{"vertices":["a","b"],"edges":[["a","b"],["b","a"]]}"#),
        Err(SpeciesError::Poset(PosetError::Cycle(..)))
    ));
}

#[test]
fn transport_along_label_isomorphism() {
    let s = Species::double_posets();
    let x = s.parse_structure_str(r#"{"elements":["a","b"],"leq":[],"leq2":[["a","b"]]}"#).unwrap();
    let target = FinPoset::discrete(&["p", "q"]).unwrap();
    let iso: BTreeMap<String, String> = [("a".into(), "q".into()), ("b".into(), "p".into())].into();
    let y = s.transport(&x, &target, &iso).unwrap();
    assert_eq!(s.structure_key(&y).unwrap(), s.structure_key(&x).unwrap());
    assert_eq!(s.isomorphisms(&x, &y).unwrap(), vec![iso]);
}

#[test]
fn unknown_tags_are_rejected() {
    assert!(matches!(Species::from_tag("matroid"), Err(SpeciesError::UnknownSpecies(_))));
    assert_eq!(Species::from_tag("Double-Posets").unwrap().tag(), "double_poset");
}
