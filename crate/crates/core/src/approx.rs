//! Bottom-up pass over a rooted tree decomposition.
//!
//! Levels are processed deepest first, T-nodes within a level by ascending
//! id. Whenever the union of bags below a T-node is still strong for the
//! current solution, the whole bag joins the solution. The regions recorded
//! at those moments are pairwise disjoint and strong, so their count is a
//! lower bound on the optimum and the solution is within a factor
//! `width + 1` of it.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{NodeSet, TNode, TdViolation, TreeDecomposition, UndirectedGraph};
use crate::regions::is_strong;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateRegion {
    pub tnode: TNode,
    pub region: NodeSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxResult {
    pub solution: NodeSet,
    pub lower_bound: usize,
    pub width: usize,
    pub certificate: Vec<CertificateRegion>,
}

impl ApproxResult {
    /// `|solution| / lower_bound`, or 0 when both are empty.
    pub fn ratio(&self) -> f64 {
        match self.lower_bound {
            0 => 0.0,
            lb => self.solution.len() as f64 / lb as f64,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("input graph is not a tree")]
pub struct NotATree;

/// Union of the bags in the subtree of `q`, with `td` rooted at
/// [`TreeDecomposition::root`]. Its exterior lies inside the bag of `q`.
pub fn subtree_union(td: &TreeDecomposition, q: TNode) -> Result<NodeSet, TdViolation> {
    td.subtree_union(td.root(), q)
}

/// Runs the pass with `td` rooted at [`TreeDecomposition::root`].
pub fn twd_approx(g: &UndirectedGraph, td: &TreeDecomposition) -> Result<ApproxResult, TdViolation> {
    let width = td.validate(g)?;
    Ok(pass(g, td, width))
}

/// The pass itself. Only needs `ext(Y_q) ⊆ X_q` for every T-node, which the
/// singleton-bag tree layout satisfies even though it misses edges.
fn pass(g: &UndirectedGraph, td: &TreeDecomposition, width: usize) -> ApproxResult {
    let rooted = td.rooted(td.root());
    let t = td.len();

    let mut below: Vec<Option<NodeSet>> = vec![None; t];
    for q in rooted.post_order() {
        let mut y = NodeSet::from_nodes(g.n(), td.bag(q).iter().copied());
        for &c in &rooted.children[q] {
            y.union_with(below[c].as_ref().expect("children come first"));
        }
        below[q] = Some(y);
    }

    let mut order: Vec<TNode> = (0..t).collect();
    order.sort_by_key(|&q| (std::cmp::Reverse(rooted.depth[q]), q));

    let mut solution = NodeSet::new(g.n());
    let mut covered = NodeSet::new(g.n());
    let mut certificate = Vec::new();
    for q in order {
        if td.bag(q).is_empty() {
            continue;
        }
        let y = below[q].as_ref().expect("computed above");
        if is_strong(g, &solution, y) {
            for &v in td.bag(q) {
                solution.insert(v);
            }
            certificate.push(CertificateRegion {
                tnode: q,
                region: y.difference(&covered),
            });
            covered.union_with(y);
        }
    }
    ApproxResult {
        solution,
        lower_bound: certificate.len(),
        width,
        certificate,
    }
}

/// Optimal solution on a tree: the same pass with one bag per node, rooted at node 0.
pub fn tree_exact(g: &UndirectedGraph) -> Result<NodeSet, NotATree> {
    if !g.is_tree() {
        return Err(NotATree);
    }
    Ok(tree_pass(g).solution)
}

/// The pass on a tree hung from node 0 with bag `{v}` at every node. The
/// lower bound equals the solution size.
pub fn tree_pass(g: &UndirectedGraph) -> ApproxResult {
    pass(g, &singleton_layout(g), 0)
}

/// Bag `{v}` for every node, tree edges = graph edges, rooted at node 0.
fn singleton_layout(g: &UndirectedGraph) -> TreeDecomposition {
    let bags = (0..g.n()).map(|v| vec![v]).collect();
    TreeDecomposition::new(g.n(), bags, g.edges().to_vec())
        .expect("graph ids are in range")
        .with_root(0)
}
