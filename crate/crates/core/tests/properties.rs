use decomp_species::coalg::IncidenceBialgebra;
use decomp_species::poset::{FinPoset, Layering, Order};
use decomp_species::simplex::{is_pullback_ul, pullback_convex_ul, DeltaMap, UlDeltaMap};
use decomp_species::species::{Shape, Species};
use proptest::prelude::*;
use proptest::sample::Index;

fn order(max: usize) -> impl Strategy<Value = Order> {
    (0..=max).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let chosen: Vec<(usize, usize)> = pairs.iter().zip(&mask).filter(|(_, &m)| m).map(|(p, _)| *p).collect();
            Order::from_pairs(n, &chosen).expect("pairs go upwards")
        })
    })
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

fn ul_map(m: usize, n: usize, pick: Index) -> UlDeltaMap {
    let all = UlDeltaMap::all(m, n);
    all[pick.index(all.len())].clone()
}

fn species_shape() -> impl Strategy<Value = (Species, Shape)> {
    (0..Species::builtins().len(), 0usize..=4, any::<Index>()).prop_map(|(s, n, pick)| {
        let species = Species::builtins().swap_remove(s);
        let shapes = species.shapes(n, 2);
        let shape = shapes[pick.index(shapes.len())].clone();
        (species, shape)
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn convex_subsets_are_middle_fibres(o in order(5)) {
        let middles: Vec<Vec<usize>> = o
            .layerings(3)
            .iter()
            .map(|l| (0..o.len()).filter(|&i| l[i] == 2).collect())
            .collect();
        for s in subsets(o.len()) {
            prop_assert_eq!(o.is_convex(&s), middles.contains(&s), "{:?}", s);
        }
    }

    #[test]
    fn convex_subsets_are_upper_sets_of_lower_sets(o in order(5)) {
        let lower = o.lower_sets();
        for s in subsets(o.len()) {
            let witnessed = lower.iter().any(|l| {
                s.iter().all(|x| l.contains(x))
                    && lower.iter().any(|m| m.iter().all(|x| l.contains(x)) && l.iter().filter(|x| !m.contains(x)).eq(s.iter()))
            });
            prop_assert_eq!(o.is_convex(&s), witnessed, "{:?}", s);
        }
    }

    #[test]
    fn layerings_are_monotone_and_complete(o in order(4), k in 0usize..4) {
        let ls = o.layerings(k);
        prop_assert!(ls.iter().all(|l| o.is_monotone_levels(l)));
        // Every lower set is the first layer of exactly one 2-layering.
        if k == 2 {
            prop_assert_eq!(ls.len(), o.lower_sets().len());
        }
    }

    #[test]
    fn generic_free_factorisation(m in 0usize..5, n in 0usize..5, pick in any::<Index>()) {
        let all = DeltaMap::all(m, n);
        let a = &all[pick.index(all.len())];
        let (generic, free) = a.generic_free_factorize();
        prop_assert!(generic.is_generic());
        prop_assert!(free.is_free());
        prop_assert_eq!(&free.compose(&generic).unwrap(), a);
    }

    #[test]
    fn beck_chevalley_for_layerings(
        o in order(4),
        n in 1usize..4,
        m in 1usize..4,
        pick_layering in any::<Index>(),
        pick_g in any::<Index>(),
        k in 0usize..4,
        offset in 0usize..4,
    ) {
        prop_assume!(k + offset <= m);
        let levels = o.layerings(n);
        prop_assume!(!levels.is_empty());
        let level: Vec<usize> = levels[pick_layering.index(levels.len())].iter().map(|&l| l as usize).collect();
        let layering = Layering::from_levels(FinPoset::numbered(o), n, level).unwrap();
        let g = ul_map(n, m, pick_g);
        let i = UlDeltaMap::convex_inclusion(k, offset, m);
        let pb = pullback_convex_ul(&g, &i).unwrap();
        prop_assert!(is_pullback_ul(&pb.j, &pb.f0, &g, &i, 3));
        let lhs = layering.push(&g).unwrap().pull(&i).unwrap();
        let rhs = layering.pull(&pb.j).unwrap().push(&pb.f0).unwrap();
        prop_assert_eq!(lhs.levels(), rhs.levels());
        prop_assert_eq!(lhs.carrier().labels(), rhs.carrier().labels());
    }

    #[test]
    fn keys_are_invariant_under_relabelling((species, shape) in species_shape(), seed in any::<Index>()) {
        let perms = decomp_species::poset::permutations(shape.len());
        let p = &perms[seed.index(perms.len())];
        let moved = species.transport_shape(&shape, p);
        prop_assert!(species.validate_shape(&moved).is_ok());
        prop_assert_eq!(species.key(&moved).unwrap(), species.key(&shape).unwrap());
    }

    #[test]
    fn transport_is_functorial((species, x, p, q) in species_shape().prop_flat_map(|(s, x)| {
        let n = x.len();
        (Just(s), Just(x), permutation(n), permutation(n))
    })) {
        let qp: Vec<usize> = (0..x.len()).map(|i| q[p[i]]).collect();
        let twice = species.transport_shape(&species.transport_shape(&x, &p), &q);
        prop_assert_eq!(twice, species.transport_shape(&x, &qp));
    }

    #[test]
    fn restriction_is_functorial((species, shape) in species_shape(), a in any::<u32>(), b in any::<u32>()) {
        let n = shape.len();
        let outer: Vec<usize> = (0..n).filter(|i| a & (1 << i) != 0).collect();
        prop_assume!(shape.order().is_convex(&outer));
        let inner_local: Vec<usize> = (0..outer.len()).filter(|i| b & (1 << i) != 0).collect();
        let first = species.restrict_shape(&shape, &outer).unwrap();
        prop_assume!(first.order().is_convex(&inner_local));
        let inner: Vec<usize> = inner_local.iter().map(|&i| outer[i]).collect();
        let twice = species.restrict_shape(&first, &inner_local).unwrap();
        prop_assert_eq!(twice, species.restrict_shape(&shape, &inner).unwrap());
    }

    #[test]
    fn coproduct_preserves_grade((species, shape) in species_shape()) {
        let alg = IncidenceBialgebra::new(&species, shape.len(), 2).unwrap();
        let delta = alg.coproduct_shape(&shape).unwrap();
        let mut total = num_rational::BigRational::from_integer(0.into());
        for ((l, r), c) in delta.terms() {
            prop_assert_eq!(l.size() + r.size(), shape.len());
            total += c;
        }
        prop_assert_eq!(total, num_rational::BigRational::from_integer(shape.order().lower_sets().len().into()));
    }
}
