//! Instance families: grids, triangle chains, pendant augmentation, the
//! subdivided grids that defeat greedy heuristics, MinRep instances and
//! their reductions, plus random graphs used by the test suites.

pub mod minrep;
mod reductions;
mod subdivided;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{DirectedGraph, Node, TreeDecomposition, UndirectedGraph};

pub use minrep::{MinRepCover, MinRepError, MinRepInstance};
pub use reductions::{
    reduce_minrep_to_directed_pds, reduce_minrep_to_pds, Reduced, ReductionError, DEFAULT_LAMBDA,
};
pub use subdivided::{gen_greedy_bad, gen_proximity_bad, ProximityBad};

/// `rows × cols` grid, node `r * cols + c`, with a path decomposition of
/// width `min(rows, cols)` (smaller when one side is 1).
pub fn gen_grid(rows: usize, cols: usize) -> (UndirectedGraph, TreeDecomposition) {
    assert!(rows >= 1 && cols >= 1, "grid sides must be positive");
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let g = UndirectedGraph::from_edges(rows * cols, edges).expect("grid edges are simple");

    // sweep along the longer side; consecutive windows of short+1 nodes
    let (short, long) = (rows.min(cols), rows.max(cols));
    let sweep: Vec<Node> = (0..long)
        .flat_map(|j| (0..short).map(move |i| if rows <= cols { id(i, j) } else { id(j, i) }))
        .collect();
    let (bags, tree): (Vec<Vec<Node>>, Vec<(usize, usize)>) = if long == 1 {
        (vec![sweep], vec![])
    } else {
        let count = sweep.len() - short;
        let bags = (0..count).map(|s| sweep[s..=s + short].to_vec()).collect();
        (bags, (1..count).map(|i| (i - 1, i)).collect())
    };
    let td = TreeDecomposition::new(rows * cols, bags, tree).expect("bags are in range");
    (g, td)
}

/// `t` triangles; node `3i + p` is vertex `p` of triangle `i`, and path `p`
/// runs through vertex `p` of every triangle. Triangle 0 is the innermost.
pub fn gen_triangle_chain(t: usize) -> UndirectedGraph {
    assert!(t >= 1, "need at least one triangle");
    let mut edges = Vec::new();
    for i in 0..t {
        let b = 3 * i;
        edges.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
        if i + 1 < t {
            edges.extend((0..3).map(|p| (b + p, b + 3 + p)));
        }
    }
    UndirectedGraph::from_edges(3 * t, edges).expect("chain edges are simple")
}

/// Adds a pendant `n + v` to every node `v`.
pub fn gen_augmented(g: &UndirectedGraph) -> UndirectedGraph {
    let n = g.n();
    let edges = g.edges().iter().copied().chain((0..n).map(|v| (v, n + v)));
    UndirectedGraph::from_edges(2 * n, edges).expect("pendants are new nodes")
}

/// `G(n, p)`.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> UndirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::from_edges(n, edges).expect("pairs are distinct")
}

/// `G(n, p)` conditioned on connectivity by adding a random spanning tree first.
pub fn random_connected_graph(n: usize, p: f64, rng: &mut impl Rng) -> UndirectedGraph {
    let tree = random_tree(n, rng);
    let mut edges: Vec<(Node, Node)> = tree.canonical_edges();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::from_edges(n, edges).expect("pairs are distinct")
}

/// Uniformly relabelled random recursive tree.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> UndirectedGraph {
    let mut label: Vec<Node> = (0..n).collect();
    label.shuffle(rng);
    let edges = (1..n).map(|v| {
        let parent = rng.gen_range(0..v);
        (label[parent], label[v])
    });
    UndirectedGraph::from_edges(n, edges).expect("tree edges are simple")
}

/// Random partial k-tree on `n` nodes: grow a k-tree by attaching each new
/// node to a random k-clique, then keep each edge with probability `keep`.
/// The returned decomposition has width `min(k, n - 1)`.
pub fn partial_k_tree(
    n: usize,
    k: usize,
    keep: f64,
    rng: &mut impl Rng,
) -> (UndirectedGraph, TreeDecomposition) {
    assert!(n >= 1, "need at least one node");
    let base = (k + 1).min(n);
    let mut edges = Vec::new();
    for u in 0..base {
        for v in u + 1..base {
            edges.push((u, v));
        }
    }
    let mut bags = vec![(0..base).collect::<Vec<Node>>()];
    let mut tree = Vec::new();
    // k-cliques available for attachment, each with a bag that contains it
    let mut cliques: Vec<(Vec<Node>, usize)> = Vec::new();
    if base == k + 1 {
        for skip in 0..base {
            let c: Vec<Node> = (0..base).filter(|&x| x != skip).collect();
            cliques.push((c, 0));
        }
    }
    for v in base..n {
        let (clique, host) = cliques[rng.gen_range(0..cliques.len())].clone();
        for &u in &clique {
            edges.push((u, v));
        }
        let mut bag = clique.clone();
        bag.push(v);
        bags.push(bag);
        let id = bags.len() - 1;
        tree.push((host, id));
        for skip in 0..clique.len() {
            let mut c: Vec<Node> = clique.iter().copied().enumerate().filter(|&(i, _)| i != skip).map(|(_, x)| x).collect();
            c.push(v);
            cliques.push((c, id));
        }
    }
    edges.retain(|_| rng.gen_bool(keep));
    let g = UndirectedGraph::from_edges(n, edges).expect("k-tree edges are simple");
    let td = TreeDecomposition::new(n, bags, tree).expect("bags are in range");
    (g, td)
}

/// Orients every edge of `g` at random; with probability `both` the edge
/// becomes an antiparallel pair instead.
pub fn random_orientation(g: &UndirectedGraph, both: f64, rng: &mut impl Rng) -> DirectedGraph {
    let mut arcs = Vec::new();
    for &(u, v) in g.edges() {
        if rng.gen_bool(both) {
            arcs.push((u, v));
            arcs.push((v, u));
        } else if rng.gen_bool(0.5) {
            arcs.push((u, v));
        } else {
            arcs.push((v, u));
        }
    }
    DirectedGraph::from_arcs(g.n(), arcs).expect("orientation of a simple graph")
}
