//! Property tests for the structural invariants: set-operator identities,
//! contraction arithmetic, canonical-code stability, truncation
//! idempotence, and subgraph monotonicity of the subdivision tester.

use proptest::prelude::*;

use hedgetrim_core::boundaried::{canonical_form, BoundariedGraph};
use hedgetrim_core::fii::{truncate_signature, ProblemId, Signature};
use hedgetrim_core::graph::{Graph, VertexSet};
use hedgetrim_core::sparsity::contains_topological_minor;

/// A random simple graph on up to `max_n` vertices, as (n, edges).
fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        let len = pairs.len();
        prop::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(&e, _)| e)
                .collect();
            Graph::from_edges(n, &edges).expect("generated edges are valid")
        })
    })
}

fn subset_strategy(n: usize) -> impl Strategy<Value = VertexSet> {
    prop::collection::vec(any::<bool>(), n).prop_map(move |mask| {
        (0..n).filter(|&v| mask[v]).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn boundary_is_inside_and_neighborhood_outside(g in graph_strategy(9)) {
        let n = g.n();
        let w: VertexSet = (0..n).step_by(2).collect();
        let boundary = g.boundary(&w).unwrap();
        let neighborhood = g.neighborhood(&w).unwrap();
        prop_assert!(boundary.is_subset(&w));
        prop_assert!(neighborhood.is_disjoint(&w));
        // the set-complement identity
        let complement: VertexSet = (0..n).filter(|v| !w.contains(v)).collect();
        prop_assert_eq!(g.boundary(&complement).unwrap(), neighborhood);
    }

    #[test]
    fn degree_wrt_is_bounded_by_the_left_set(g in graph_strategy(9)) {
        let n = g.n();
        let x: VertexSet = (0..n / 2).collect();
        let y: VertexSet = (n / 2..n).collect();
        let d = g.degree_wrt(&x, &y).unwrap();
        prop_assert!(d <= x.len());
        let full = x.iter().all(|&u| g.neighbors(u).iter().any(|v| y.contains(v)));
        prop_assert_eq!(d == x.len(), full);
    }

    #[test]
    fn contraction_shrinks_by_one_and_never_adds_edges(g in graph_strategy(8)) {
        for (u, v) in g.edges() {
            let (h, map) = g.contract_edge(u, v).unwrap();
            prop_assert_eq!(h.n(), g.n() - 1);
            prop_assert!(h.m() <= g.m());
            prop_assert_eq!(map[u], map[v]);
        }
    }

    #[test]
    fn components_partition_the_vertex_set(g in graph_strategy(10)) {
        let comps = g.connected_components();
        let mut seen = VertexSet::new();
        for comp in &comps {
            for &v in comp {
                prop_assert!(seen.insert(v), "vertex {} in two components", v);
            }
            prop_assert!(g.is_connected_subset(comp));
        }
        prop_assert_eq!(seen.len(), g.n());
    }

    #[test]
    fn canonical_codes_are_invariant_under_internal_relabeling(
        g in graph_strategy(6),
        swap in any::<bool>(),
    ) {
        // boundary = vertex 0; relabel two internal vertices
        let n = g.n();
        let bg = BoundariedGraph::new(g.clone(), vec![0]).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        if swap && n >= 3 {
            perm.swap(1, 2);
        }
        let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let relabeled = BoundariedGraph::new(Graph::from_edges(n, &edges).unwrap(), vec![0]).unwrap();
        prop_assert_eq!(canonical_form(&bg), canonical_form(&relabeled));
    }

    #[test]
    fn vc_truncation_is_idempotent_and_dominated(
        values in prop::collection::vec(prop::option::weighted(0.9, 0u64..12), 4),
    ) {
        let sig = Signature { problem: ProblemId::Vc, t: 2, values };
        let once = truncate_signature(&sig).unwrap();
        let twice = truncate_signature(&once).unwrap();
        prop_assert_eq!(&once, &twice);
        // truncation never increases an entry
        for (raw, cut) in sig.values.iter().zip(&once.values) {
            if let (Some(a), Some(b)) = (raw, cut) {
                prop_assert!(b <= a);
            }
        }
    }

    #[test]
    fn subdivision_containment_is_monotone_under_subgraphs(
        g in graph_strategy(8),
        drop_index in any::<prop::sample::Index>(),
    ) {
        let h = Graph::complete(3);
        let edges = g.edges();
        if edges.is_empty() {
            return Ok(());
        }
        // remove one edge: containment may only go from true to false
        let dropped = drop_index.index(edges.len());
        let kept: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != dropped)
            .map(|(_, &e)| e)
            .collect();
        let sub = Graph::from_edges(g.n(), &kept).unwrap();
        if contains_topological_minor(&sub, &h).unwrap() {
            prop_assert!(contains_topological_minor(&g, &h).unwrap());
        }
    }

    #[test]
    fn removing_a_boundary_separator_detaches_the_interior(
        (g, w) in graph_strategy(9).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), subset_strategy(n))
        }),
    ) {
        // ∂(W) separates W's interior from the rest: no edge runs from
        // W ∖ ∂(W) to V ∖ W.
        let boundary = g.boundary(&w).unwrap();
        let interior: VertexSet = w.difference(&boundary).copied().collect();
        for &v in &interior {
            for u in g.neighbors(v) {
                prop_assert!(w.contains(u));
            }
        }
    }
}
