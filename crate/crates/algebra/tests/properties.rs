use bei_algebra::dimension::hilbert_numerator;
use bei_algebra::groebner::{contains, groebner_basis, ideal_intersection, initial_ideal, GbCaps};
use bei_algebra::oracle::{binomial_edge_ideal, oracle_dim, oracle_resolution, verify_exactseq, OracleCaps};
use bei_algebra::{Fp, Monomial, F31991, F32003};
use bei_core::cutsets::combinatorial_dim;
use bei_core::{Graph, Label};
use proptest::prelude::*;

fn graph(max_n: u32) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(Label, Label)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
            Graph::new(1..=n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gb_is_idempotent_and_contains_generators(g in graph(5), m in 2u32..4) {
        let caps = GbCaps::default();
        let j = binomial_edge_ideal::<F32003>(&g, m).unwrap();
        let gb = groebner_basis(&j, &caps).unwrap();
        prop_assert_eq!(&groebner_basis(&gb, &caps).unwrap(), &gb);
        prop_assert_eq!(&groebner_basis(&j, &caps).unwrap(), &gb);
        prop_assert!(j.generators.iter().all(|p| contains(&gb, p)));
    }

    #[test]
    fn oracle_dim_matches_cut_sets(g in graph(6), m in 2u32..4) {
        let d = oracle_dim::<F32003>(&g, m, &OracleCaps::default()).unwrap();
        prop_assert_eq!(d.dim as usize, combinatorial_dim(&g, m).unwrap().0);
    }

    #[test]
    fn betti_numbers_match_hilbert_series(g in graph(5), m in 2u32..4) {
        let caps = OracleCaps::default();
        let r = oracle_resolution::<F32003>(&g, m, &caps).unwrap();
        let j = binomial_edge_ideal::<F32003>(&g, m).unwrap();
        let gb = groebner_basis(&j, &caps.gb).unwrap();
        let leads: Vec<Monomial> = initial_ideal(&gb).generators.iter().map(|p| p.lm()).collect();
        prop_assert_eq!(r.betti.hilbert_numerator(), hilbert_numerator(&leads));
        prop_assert!(r.betti.entries.iter().all(|e| e.j as usize >= e.i));
        prop_assert_eq!(r.betti.get(0, 0), 1);
        prop_assert_eq!(r.betti.depth().unwrap() + r.betti.pd().unwrap(), r.betti.nvars);
        let again = oracle_resolution::<F31991>(&g, m, &caps).unwrap();
        prop_assert_eq!(again.betti, r.betti);
    }

    #[test]
    fn intersection_lies_in_both(g in graph(4), h in graph(4)) {
        prop_assume!(g.num_vertices() == h.num_vertices());
        let caps = GbCaps::default();
        let a = binomial_edge_ideal::<F32003>(&g, 2).unwrap();
        let b = binomial_edge_ideal::<F32003>(&h, 2).unwrap();
        let (ga, gb) = (groebner_basis(&a, &caps).unwrap(), groebner_basis(&b, &caps).unwrap());
        let meet = ideal_intersection(&a, &b, &caps).unwrap();
        prop_assert!(meet.generators.iter().all(|p| contains(&ga, p) && contains(&gb, p)));
    }

    #[test]
    fn exact_sequence_identity(g in graph(4), i in any::<prop::sample::Index>()) {
        let v = *i.get(&g.vertices().collect::<Vec<_>>());
        prop_assert!(verify_exactseq::<F32003>(&g, v, 2, &OracleCaps::default()).unwrap());
    }
}

#[test]
fn small_characteristic_agrees_on_paths() {
    let caps = OracleCaps::default();
    for t in 2..6 {
        let a = oracle_resolution::<Fp<101>>(&Graph::path(t), 2, &caps).unwrap();
        let b = oracle_resolution::<F32003>(&Graph::path(t), 2, &caps).unwrap();
        assert_eq!(a.betti, b.betti);
        assert_eq!(b.betti.reg(), Some(t - 1));
    }
}
