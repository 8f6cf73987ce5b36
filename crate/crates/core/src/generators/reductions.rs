//! MinRep to power domination. In both reductions an optimal solution is a
//! minimum MinRep cover plus the hub node `w*`.

use serde::Serialize;
use thiserror::Error;

use super::minrep::{MinRepCover, MinRepInstance};
use crate::graph::{DirectedGraph, Node, NodeSet, UndirectedGraph};

pub const DEFAULT_LAMBDA: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("lambda must be at least 4, got {0}")]
    LambdaTooSmall(usize),
    #[error("instance has no super edge")]
    NoSuperEdge,
}

/// A reduced instance with the positions of the hub and the copies of A and B.
#[derive(Clone, Debug, Serialize)]
pub struct Reduced<G> {
    pub graph: G,
    pub w_star: Node,
    pub a_nodes: Vec<Node>,
    pub b_nodes: Vec<Node>,
}

impl<G> Reduced<G> {
    /// `{w*} ∪ cover` as a node set of the reduced graph.
    pub fn lift(&self, cover: &MinRepCover, n: usize) -> NodeSet {
        let mut s = NodeSet::new(n);
        s.insert(self.w_star);
        for &a in &cover.a {
            s.insert(self.a_nodes[a]);
        }
        for &b in &cover.b {
            s.insert(self.b_nodes[b]);
        }
        s
    }
}

fn check(m: &MinRepInstance, lambda: usize) -> Result<(), ReductionError> {
    if lambda < 4 {
        return Err(ReductionError::LambdaTooSmall(lambda));
    }
    if m.edges().is_empty() {
        return Err(ReductionError::NoSuperEdge);
    }
    Ok(())
}

/// Undirected reduction. Node 0 is `w*`, nodes 1–3 its pendants, then A, then
/// B, then for every super edge and copy a cycle `u1 v1 w1 u2 v2 w2 …` with
/// one triple per edge; `a_k – u_k` and `b_k – v_k`.
///
/// Size: `4 + |A| + |B| + 3λ|E|`.
pub fn reduce_minrep_to_pds(m: &MinRepInstance, lambda: usize) -> Result<Reduced<UndirectedGraph>, ReductionError> {
    check(m, lambda)?;
    let w_star = 0;
    let a_nodes: Vec<Node> = (0..m.na()).map(|a| 4 + a).collect();
    let b_nodes: Vec<Node> = (0..m.nb()).map(|b| 4 + m.na() + b).collect();
    let mut n = 4 + m.na() + m.nb();
    let mut edges: Vec<(Node, Node)> = (1..4).map(|p| (w_star, p)).collect();
    edges.extend(a_nodes.iter().chain(&b_nodes).map(|&x| (w_star, x)));
    for es in m.super_edges().values() {
        let len = 3 * es.len();
        for _ in 0..lambda {
            let base = n;
            n += len;
            if len == 3 {
                edges.extend([(base, base + 1), (base + 1, base + 2), (base, base + 2)]);
            } else {
                edges.extend((0..len).map(|i| (base + i, base + (i + 1) % len)));
            }
            for (k, &(a, b)) in es.iter().enumerate() {
                edges.push((a_nodes[a], base + 3 * k));
                edges.push((b_nodes[b], base + 3 * k + 1));
            }
        }
    }
    let graph = UndirectedGraph::from_edges(n, edges).expect("reduction edges are simple");
    Ok(Reduced {
        graph,
        w_star,
        a_nodes,
        b_nodes,
    })
}

/// Directed reduction, always acyclic. Node 0 is `w*`, then A, then B, then
/// for every super edge and copy a center `c` followed by six nodes
/// `u, v, d, α, β, γ` per edge, wired as
///
/// ```text
/// w* → A ∪ B, d, α, γ     a → u     b → v
/// d → c, u, v             γ → c, β  α → c, β, u
/// ```
///
/// With `a` and `b` chosen, `d` forces `c`, then `γ`, `α`, `d` force `β`,
/// `u`, `v` in every slot. Without a covering pair every dominated gadget
/// node keeps two undominated out-neighbors.
pub fn reduce_minrep_to_directed_pds(
    m: &MinRepInstance,
    lambda: usize,
) -> Result<Reduced<DirectedGraph>, ReductionError> {
    check(m, lambda)?;
    let w_star = 0;
    let a_nodes: Vec<Node> = (0..m.na()).map(|a| 1 + a).collect();
    let b_nodes: Vec<Node> = (0..m.nb()).map(|b| 1 + m.na() + b).collect();
    let mut n = 1 + m.na() + m.nb();
    let mut arcs: Vec<(Node, Node)> = a_nodes.iter().chain(&b_nodes).map(|&x| (w_star, x)).collect();
    for es in m.super_edges().values() {
        for _ in 0..lambda {
            let c = n;
            n += 1 + 6 * es.len();
            for (k, &(a, b)) in es.iter().enumerate() {
                let s = c + 1 + 6 * k;
                let (u, v, d, alpha, beta, gamma) = (s, s + 1, s + 2, s + 3, s + 4, s + 5);
                arcs.extend([
                    (w_star, d),
                    (w_star, alpha),
                    (w_star, gamma),
                    (a_nodes[a], u),
                    (b_nodes[b], v),
                    (d, c),
                    (d, u),
                    (d, v),
                    (gamma, c),
                    (gamma, beta),
                    (alpha, c),
                    (alpha, beta),
                    (alpha, u),
                ]);
            }
        }
    }
    let graph = DirectedGraph::from_arcs(n, arcs).expect("reduction arcs are simple");
    Ok(Reduced {
        graph,
        w_star,
        a_nodes,
        b_nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::{closure, is_feasible};

    fn tiny() -> MinRepInstance {
        // two parts per side, one edge per part pair plus one extra
        MinRepInstance::new(
            4,
            4,
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0, 1], vec![2, 3]],
            vec![(0, 0), (1, 2), (2, 1), (3, 3), (0, 2)],
        )
        .unwrap()
    }

    #[test]
    fn sizes() {
        let m = tiny();
        let r = reduce_minrep_to_pds(&m, 4).unwrap();
        assert_eq!(r.graph.n(), 4 + 8 + 3 * 4 * 5);
        let d = reduce_minrep_to_directed_pds(&m, 4).unwrap();
        assert!(d.graph.n() <= 1 + 8 + 7 * 4 * 5);
        assert!(d.graph.is_acyclic());
        assert_eq!(reduce_minrep_to_pds(&m, 3).unwrap_err(), ReductionError::LambdaTooSmall(3));
    }

    #[test]
    fn optimal_cover_lifts_to_feasible_sets() {
        let m = tiny();
        let cover = m.solve_exact().unwrap();
        let r = reduce_minrep_to_pds(&m, 4).unwrap();
        assert!(is_feasible(&r.graph, &r.lift(&cover, r.graph.n())));
        let d = reduce_minrep_to_directed_pds(&m, 4).unwrap();
        assert!(is_feasible(&d.graph, &d.lift(&cover, d.graph.n())));
    }

    #[test]
    fn hub_alone_leaves_gadgets_open() {
        let m = tiny();
        let d = reduce_minrep_to_directed_pds(&m, 4).unwrap();
        let n = d.graph.n();
        let dom = closure(&d.graph, &NodeSet::from_nodes(n, [d.w_star]));
        // w*, A, B and d/α/γ of every slot
        assert_eq!(dom.len(), 1 + 8 + 3 * 4 * 5);
    }
}
