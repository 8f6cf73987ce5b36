//! Grids with subdivided row edges on which greedy heuristics do badly.
//!
//! Original grid nodes are numbered row-major (`r * cols + c`); subdivision
//! nodes follow, in row-major order of the edges they subdivide. At each of
//! the four corners the row edges in the two outermost rows next to the
//! corner stay unsubdivided; with that treatment no single node dominates
//! more than 7 nodes of the greedy instance.

use std::collections::HashSet;

use crate::graph::{Node, UndirectedGraph};

struct Builder {
    n: usize,
    edges: Vec<(Node, Node)>,
}

impl Builder {
    fn fresh(&mut self) -> Node {
        self.n += 1;
        self.n - 1
    }

    /// Replaces `u - v` by a path through `k` new nodes.
    fn chain(&mut self, u: Node, v: Node, k: usize) {
        let mut prev = u;
        for _ in 0..k {
            let s = self.fresh();
            self.edges.push((prev, s));
            prev = s;
        }
        self.edges.push((prev, v));
    }
}

fn corner_row_edges(rows: usize, cols: usize) -> HashSet<(usize, usize)> {
    let mut keep = HashSet::new();
    for r in [0, 1] {
        for rr in [r, rows - 1 - r] {
            for cc in [0, cols - 2] {
                keep.insert((rr, cc));
            }
        }
    }
    keep
}

/// Grid of `rows × cols` with every row edge `(r, c) - (r, c + 1)` replaced by
/// a path through `sub(r, c)` new nodes (0 keeps the edge).
fn subdivided_grid(rows: usize, cols: usize, sub: impl Fn(usize, usize) -> usize) -> UndirectedGraph {
    let mut b = Builder {
        n: rows * cols,
        edges: Vec::new(),
    };
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if r + 1 < rows {
                b.edges.push((v, v + cols));
            }
            if c + 1 < cols {
                b.chain(v, v + 1, sub(r, c));
            }
        }
    }
    UndirectedGraph::from_edges(b.n, b.edges).expect("subdivided grid is simple")
}

/// The `9l × 9m` grid with row edges subdivided once, corners excepted.
///
/// An original node away from the border dominates exactly 7 nodes, the
/// maximum over all nodes. Any full column is feasible.
pub fn gen_greedy_bad(l: usize, m: usize) -> UndirectedGraph {
    assert!(l >= 1 && m >= 1, "block counts must be positive");
    let (rows, cols) = (9 * l, 9 * m);
    let keep = corner_row_edges(rows, cols);
    subdivided_grid(rows, cols, |r, c| usize::from(!keep.contains(&(r, c))))
}

#[derive(Clone, Debug)]
pub struct ProximityBad {
    pub graph: UndirectedGraph,
    /// Middle-row original nodes in odd columns.
    pub whites: Vec<Node>,
    /// Original nodes of column 0; together they dominate the whole graph.
    pub first_column: Vec<Node>,
}

/// The `h × (2m + 1)` grid whose middle-row edges carry `l + 1` subdivision
/// nodes and whose other row edges carry one (corners excepted).
///
/// A white node alone dominates `2l + 7` nodes; a white next to an already
/// chosen white adds `2l + 6`.
pub fn gen_proximity_bad(h: usize, m: usize, l: usize) -> ProximityBad {
    assert!(h >= 9 && h % 2 == 1, "height must be odd and at least 9");
    assert!(m >= 1 && l >= 1, "m and l must be positive");
    let cols = 2 * m + 1;
    let mid = h / 2;
    let keep = corner_row_edges(h, cols);
    let graph = subdivided_grid(h, cols, |r, c| {
        if r == mid {
            l + 1
        } else {
            usize::from(!keep.contains(&(r, c)))
        }
    });
    ProximityBad {
        graph,
        whites: (1..cols).step_by(2).map(|c| mid * cols + c).collect(),
        first_column: (0..h).map(|r| r * cols).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeSet;
    use crate::propagation::{closure, is_feasible};

    #[test]
    fn greedy_bad_counts() {
        let g = gen_greedy_bad(1, 1);
        // 81 originals + 72 row edges - 8 kept at the corners
        assert_eq!(g.n(), 81 + 72 - 8);
        let best = (0..g.n())
            .map(|v| closure(&g, &NodeSet::from_nodes(g.n(), [v])).len())
            .max()
            .unwrap();
        assert_eq!(best, 7);
        assert_eq!(closure(&g, &NodeSet::from_nodes(g.n(), [4 * 9 + 4])).len(), 7);
        let col = NodeSet::from_nodes(g.n(), (0..9).map(|r| r * 9));
        assert!(is_feasible(&g, &col));
    }

    #[test]
    fn proximity_bad_counts() {
        let p = gen_proximity_bad(9, 2, 5);
        let n = p.graph.n();
        let single = |v| closure(&p.graph, &NodeSet::from_nodes(n, [v])).len();
        assert_eq!(p.whites.len(), 2);
        assert_eq!(single(p.whites[0]), 17);
        assert!(is_feasible(&p.graph, &NodeSet::from_nodes(n, p.first_column.iter().copied())));
    }
}
