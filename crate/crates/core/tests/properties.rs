use bei_core::cutsets::{combinatorial_dim, cut_point_sets, fan_cut_point_sets};
use bei_core::families::fan_graph;
use bei_core::formulas::{fan_dim, predict};
use bei_core::{Atom, Error, FanSpec, Graph, GraphExpr, Label, MarkRef, Op, VertexSet};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = Graph> {
    (1u32..9).prop_flat_map(|n| {
        let pairs: Vec<(Label, Label)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
            Graph::new(1..=n, edges).unwrap()
        })
    })
}

fn subset(g: &Graph, mask: u32) -> VertexSet {
    g.vertices().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).collect()
}

fn fan_spec(pure: bool) -> impl Strategy<Value = FanSpec> {
    (2u32..6, any::<u64>(), 1usize..4).prop_filter_map("invalid spec", move |(n, seed, parts)| {
        let mut rng = seed;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 33) as usize
        };
        let mut verts: Vec<Label> = (1..=n).collect();
        for i in (1..verts.len()).rev() {
            verts.swap(i, next() % (i + 1));
        }
        let w = 1 + next() % n as usize;
        let k = parts.min(w);
        let mut cuts: Vec<usize> = (1..w).collect();
        for i in (1..cuts.len()).rev() {
            cuts.swap(i, next() % (i + 1));
        }
        let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
        cuts.sort_unstable();
        let mut partition = Vec::new();
        let mut start = 0;
        for c in cuts.into_iter().chain([w]) {
            partition.push(verts[start..c].to_vec());
            start = c;
        }
        let a = partition
            .iter()
            .map(|p| (0..p.len() as u32).map(|j| j + 1 + if pure { 1 } else { 1 + (next() % 2) as u32 }).collect())
            .collect();
        FanSpec::new(n, partition, a).ok()
    })
}

fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (2u32..5).prop_map(Atom::Path),
        (1u32..4).prop_map(Atom::Fp),
        fan_spec(true).prop_filter_map("fans need two marks", |s| (s.k() >= 2).then_some(Atom::Fan(s))),
        fan_spec(false).prop_filter_map("fans need two marks", |s| {
            (s.default_marks().len() == 2).then_some(Atom::Fan(s))
        }),
    ]
}

fn marks(a: &Atom) -> Vec<Label> {
    a.realize().unwrap().marks
}

/// A left-deep chain where each new atom is glued to the last one.
fn expr() -> impl Strategy<Value = GraphExpr> {
    proptest::collection::vec((atom(), any::<bool>()), 1..4).prop_map(|items| {
        let mut it = items.into_iter();
        let (first, _) = it.next().unwrap();
        let mut last_free = *marks(&first).last().unwrap();
        let mut e = GraphExpr::atom(first);
        for (i, (a, circ)) in it.enumerate() {
            let ms = marks(&a);
            let lmark = MarkRef { atom: i, label: last_free };
            let rmark = MarkRef::local(ms[0]);
            last_free = *ms.last().unwrap();
            let b = GraphExpr::atom(a);
            e = if circ { GraphExpr::circ(e, lmark, b, rmark) } else { GraphExpr::star(e, lmark, b, rmark) };
        }
        e
    })
}

fn ops(e: &GraphExpr) -> Vec<Op> {
    match e {
        GraphExpr::Atom(_) => Vec::new(),
        GraphExpr::Node { op, left, right, .. } => {
            let mut v = ops(left);
            v.extend(ops(right));
            v.push(*op);
            v
        }
    }
}

proptest! {
    #[test]
    fn deletion_composes(g in graph(), a in any::<u32>(), b in any::<u32>()) {
        let (sa, sb) = (subset(&g, a), subset(&g, b));
        let both: VertexSet = sa.union(&sb).copied().collect();
        let stepwise = g.delete_vertices(&sa).unwrap().delete_vertices(&(&sb - &sa)).unwrap();
        prop_assert_eq!(g.delete_vertices(&both).unwrap(), stepwise);
    }

    #[test]
    fn saturation_is_idempotent(g in graph(), i in any::<prop::sample::Index>()) {
        let v = i.get(&g.vertices().collect::<Vec<_>>()).to_owned();
        let once = g.saturate_neighborhood(v).unwrap();
        prop_assert_eq!(once.saturate_neighborhood(v).unwrap(), once.clone());
        prop_assert!(once.is_clique(&g.neighbors(v, true).unwrap()));
    }

    #[test]
    fn components_after_vertex_deletion(g in graph(), i in any::<prop::sample::Index>()) {
        let v = i.get(&g.vertices().collect::<Vec<_>>()).to_owned();
        let deg = g.degree(v).unwrap();
        let (c, cv) = (g.num_components(), g.delete_vertex(v).unwrap().num_components());
        if deg == 0 {
            prop_assert_eq!(cv + 1, c);
        } else {
            prop_assert!(c <= cv && cv + 1 <= c + deg);
            prop_assert_eq!(g.is_cut_vertex(v).unwrap(), cv > c);
        }
    }

    #[test]
    fn graph_text_round_trip(g in graph()) {
        prop_assert_eq!(g.canonical().parse::<Graph>().unwrap(), g.clone());
        let json = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Graph>(&json).unwrap(), g);
    }

    #[test]
    fn expr_json_round_trip(e in expr()) {
        let json = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<GraphExpr>(&json).unwrap(), e);
    }

    #[test]
    fn vertex_count_bookkeeping(e in expr()) {
        let real = match e.realize() {
            Ok(r) => r,
            Err(Error::OperandIsP2) => return Ok(()),
            Err(err) => return Err(TestCaseError::fail(err.to_string())),
        };
        let atoms: usize = e.atoms().iter().map(|a| a.num_vertices()).sum();
        let lost: usize = ops(&e).iter().map(|o| if *o == Op::Circ { 3 } else { 1 }).sum();
        prop_assert_eq!(real.graph().num_vertices(), atoms - lost);
        prop_assert!(real.graph().is_connected());
    }

    #[test]
    fn fan_family_matches_enumeration(spec in fan_spec(false)) {
        let g = fan_graph(&spec).unwrap();
        prop_assume!(g.num_vertices() <= 14);
        prop_assert_eq!(fan_cut_point_sets(&spec).unwrap(), cut_point_sets(&g).unwrap());
    }

    #[test]
    fn fan_dimension_matches_cut_sets(spec in fan_spec(false), m in 2u32..6) {
        let g = fan_graph(&spec).unwrap();
        prop_assume!(g.num_vertices() <= 14);
        prop_assert_eq!(combinatorial_dim(&g, m).unwrap().0 as u32, fan_dim(&spec, m));
    }

    #[test]
    fn predictions_are_consistent(e in expr(), m in 2u32..6) {
        match predict(&e, m) {
            Ok(r) => {
                prop_assert!(r.depth.lo() <= r.dim.hi());
                if let Some(c) = &r.combinatorial_dim {
                    prop_assert!(r.dim.contains(c.dim));
                }
            }
            Err(Error::OperandIsP2) => {}
            Err(err) => return Err(TestCaseError::fail(format!("{e}: {err}"))),
        }
    }
}
