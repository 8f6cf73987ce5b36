mod common;

use pds_core::approx::{subtree_union, tree_exact, tree_pass, twd_approx, ApproxResult, NotATree};
use pds_core::exact::{exact_pds, ExactConfig};
use pds_core::generators::{gen_grid, partial_k_tree, random_tree};
use pds_core::graph::{NodeSet, TreeDecomposition, UndirectedGraph};
use pds_core::propagation::is_feasible;
use pds_core::regions::is_strong;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opt(g: &UndirectedGraph) -> usize {
    exact_pds(g, ExactConfig::default()).unwrap().opt_size
}

/// Replays the certificate: region `l` must be strong for the bags chosen
/// before it, and regions must be pairwise disjoint.
fn check_certificate(g: &UndirectedGraph, td: &TreeDecomposition, r: &ApproxResult) {
    let mut before = NodeSet::new(g.n());
    let mut seen = NodeSet::new(g.n());
    for c in &r.certificate {
        assert!(is_strong(g, &before, &c.region), "region at t-node {} not strong", c.tnode);
        assert!(c.region.is_disjoint(&seen));
        seen.union_with(&c.region);
        for &v in td.bag(c.tnode) {
            before.insert(v);
        }
    }
    assert_eq!(before, r.solution);
    assert_eq!(r.lower_bound, r.certificate.len());
}

#[test]
fn random_partial_k_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..120 {
        let k = 1 + i % 3;
        let n = rng.gen_range(k + 1..=14);
        let (g, td) = partial_k_tree(n, k, 0.7, &mut rng);
        let r = twd_approx(&g, &td).unwrap();
        assert!(is_feasible(&g, &r.solution));
        assert!(r.solution.len() <= (r.width + 1) * r.lower_bound);
        let best = opt(&g);
        assert!(r.lower_bound <= best, "lower bound {} above optimum {best}", r.lower_bound);
        check_certificate(&g, &td, &r);
    }
}

#[test]
fn every_rooting_is_feasible_and_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (g, td) = partial_k_tree(10, 2, 0.7, &mut rng);
        let best = opt(&g);
        for root in 0..td.len() {
            let rooted = td.clone().with_root(root);
            let r = twd_approx(&g, &rooted).unwrap();
            assert!(is_feasible(&g, &r.solution));
            assert!(r.solution.len() <= (r.width + 1) * best);
            check_certificate(&g, &rooted, &r);
        }
    }
}

#[test]
fn grid_three_by_four() {
    let (g, td) = gen_grid(3, 4);
    let r = twd_approx(&g, &td).unwrap();
    assert!(is_feasible(&g, &r.solution));
    assert!(r.solution.len() <= (r.width + 1) * opt(&g));
}

#[test]
fn trees_are_solved_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let g = random_tree(1 + i % 12, &mut rng);
        let s = tree_exact(&g).unwrap();
        assert!(is_feasible(&g, &s));
        assert_eq!(s.len(), opt(&g));
        let pass = tree_pass(&g);
        assert_eq!(pass.lower_bound, s.len());
    }
    let cycle = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    assert_eq!(tree_exact(&cycle), Err(NotATree));
}

#[test]
fn subtree_unions_separate() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let n = rng.gen_range(2..16);
        let (g, td) = partial_k_tree(n, 2, 0.6, &mut rng);
        let root = td.root();
        assert!(subtree_union(&td, root).unwrap().is_full());
        for q in 0..td.len() {
            let y = subtree_union(&td, q).unwrap();
            let bag = NodeSet::from_nodes(n, td.bag(q).iter().copied());
            assert!(g.exterior(&y).is_subset(&bag));
            if q != root && td.tree_neighbors(q).len() == 1 {
                assert_eq!(y, bag);
            }
        }
        assert!(subtree_union(&td, td.len()).is_err());
    }
}
