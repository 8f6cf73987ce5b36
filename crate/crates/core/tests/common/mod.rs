#![allow(dead_code)]

use pds_core::graph::{DirectedGraph, Node, NodeSet, UndirectedGraph};
use proptest::prelude::*;

/// Undirected graph on `lo..=hi` nodes, each pair present with probability about `density`.
pub fn graph(lo: usize, hi: usize, density: f64) -> impl Strategy<Value = UndirectedGraph> {
    (lo..=hi).prop_flat_map(move |n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(proptest::bool::weighted(density), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            UndirectedGraph::from_edges(n, edges).unwrap()
        })
    })
}

pub fn digraph(lo: usize, hi: usize, density: f64) -> impl Strategy<Value = DirectedGraph> {
    (lo..=hi).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(density), n * n).prop_map(move |bits| {
            let arcs = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v && bits[u * n + v]);
            DirectedGraph::from_arcs(n, arcs).unwrap()
        })
    })
}

/// A graph together with a subset chosen by a bit mask.
pub fn with_subset<G: std::fmt::Debug + Clone>(
    g: impl Strategy<Value = G>,
    order: fn(&G) -> usize,
) -> impl Strategy<Value = (G, NodeSet)> {
    g.prop_flat_map(move |g| {
        let n = order(&g);
        (Just(g), proptest::collection::vec(any::<bool>(), n))
    })
    .prop_map(move |(g, bits)| {
        let n = bits.len();
        let set = NodeSet::from_nodes(n, (0..n).filter(|&i| bits[i]));
        (g, set)
    })
}

pub fn set_from_mask(n: usize, mask: u64) -> NodeSet {
    NodeSet::from_nodes(n, (0..n).filter(|&i| mask >> i & 1 == 1))
}

/// Textbook fixpoint: rescan every node until nothing changes.
pub fn naive_closure(g: &UndirectedGraph, s: &NodeSet) -> NodeSet {
    let mut dom = s.clone();
    for v in s.iter() {
        for &w in g.neighbors(v) {
            dom.insert(w);
        }
    }
    loop {
        let mut changed = false;
        for v in dom.to_vec() {
            let open: Vec<Node> = g.neighbors(v).iter().copied().filter(|&w| !dom.contains(w)).collect();
            if open.len() == 1 {
                dom.insert(open[0]);
                changed = true;
            }
        }
        if !changed {
            return dom;
        }
    }
}

/// Brute-force optimum over all subsets, smallest first.
pub fn brute_opt(n: usize, feasible: impl Fn(&NodeSet) -> bool) -> usize {
    assert!(n <= 20);
    (0..1u64 << n)
        .filter(|&m| feasible(&set_from_mask(n, m)))
        .map(|m| m.count_ones() as usize)
        .min()
        .expect("V is feasible")
}
