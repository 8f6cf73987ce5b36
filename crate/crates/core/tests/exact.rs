mod common;

use pds_core::exact::{exact_directed_pds, exact_dominating_set, exact_pds, ExactConfig, ExactError};
use pds_core::generators::random_graph;
use pds_core::graph::{DirectedGraph, UndirectedGraph};
use pds_core::propagation::is_feasible;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn symmetric(g: &UndirectedGraph) -> DirectedGraph {
    DirectedGraph::from_arcs(g.n(), g.edges().iter().flat_map(|&(u, v)| [(u, v), (v, u)])).unwrap()
}

proptest! {
    #[test]
    fn matches_brute_force(g in common::graph(1, 10, 0.25)) {
        let r = exact_pds(&g, ExactConfig::default()).unwrap();
        prop_assert_eq!(r.opt_size, common::brute_opt(g.n(), |s| is_feasible(&g, s)));
        prop_assert_eq!(r.witness.len(), r.opt_size);
        prop_assert!(is_feasible(&g, &r.witness));
    }

    #[test]
    fn directed_matches_brute_force(d in common::digraph(1, 8, 0.25)) {
        let r = exact_directed_pds(&d, ExactConfig::default()).unwrap();
        prop_assert_eq!(r.opt_size, common::brute_opt(d.n(), |s| is_feasible(&d, s)));
        for v in 0..d.n() {
            if d.in_degree(v) == 0 {
                prop_assert!(r.witness.contains(v));
            }
        }
    }

    #[test]
    fn domination_needs_at_least_as_many(g in common::graph(1, 10, 0.3)) {
        let pds = exact_pds(&g, ExactConfig::default()).unwrap().opt_size;
        let ds = exact_dominating_set(&g, ExactConfig::default()).unwrap().opt_size;
        prop_assert!(pds <= ds);
    }
}

#[test]
fn symmetric_digraphs_agree_with_undirected() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1..=7 {
        for _ in 0..40 {
            let g = random_graph(n, 0.35, &mut rng);
            let u = exact_pds(&g, ExactConfig::default()).unwrap().opt_size;
            let d = exact_directed_pds(&symmetric(&g), ExactConfig::default()).unwrap().opt_size;
            assert_eq!(u, d, "{:?}", g.edges());
        }
    }
}

#[test]
fn budget_and_cap() {
    let g = UndirectedGraph::empty(12);
    match exact_pds(&g, ExactConfig::with_budget(1000)) {
        Err(e @ ExactError::BudgetExceeded { .. }) => assert!(e.lower_bound() >= 3),
        other => panic!("expected budget error, got {other:?}"),
    }
    let cfg = ExactConfig { size_cap: Some(3), ..Default::default() };
    assert_eq!(exact_pds(&g, cfg), Err(ExactError::SizeCap { cap: 3 }));
    let r = exact_pds(&UndirectedGraph::empty(0), ExactConfig::default()).unwrap();
    assert_eq!(r.opt_size, 0);
}
