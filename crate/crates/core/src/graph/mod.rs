//! Graph data model shared by every solver.
//!
//! Node ids are dense and 0-based in memory. Files use 1-based ids; the
//! conversion happens only in [`io`].

mod decomposition;
pub mod io;
mod nodeset;

pub use decomposition::{
    elimination_decomposition, NiceKind, NiceNode, NiceTreeDecomposition, RootedTree,
    TdViolation, TreeDecomposition,
};
pub use nodeset::NodeSet;

use std::collections::HashSet;
use thiserror::Error;

/// Dense node index.
pub type Node = usize;

/// Index of a T-node (bag) in a tree decomposition.
pub type TNode = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("self-loop at node {node}")]
    SelfLoop { node: Node },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: Node, v: Node },
    #[error("node {node} out of range (n = {n})")]
    NodeOutOfRange { node: Node, n: usize },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

/// Simple undirected graph with sorted adjacency lists.
///
/// The edge list keeps insertion order so that files round-trip byte for
/// byte; adjacency lists are sorted ascending, which is the canonical
/// iteration order used by every "first"/"pick any" step downstream.
#[derive(Clone, Debug)]
pub struct UndirectedGraph {
    adj: Vec<Vec<Node>>,
    edges: Vec<(Node, Node)>,
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Self {
        UndirectedGraph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Node, Node)>,
    {
        let mut g = UndirectedGraph::empty(n);
        let mut seen = HashSet::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { node: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            g.edges.push((u, v));
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in insertion order, endpoints as given at construction.
    pub fn edges(&self) -> &[(Node, Node)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Node) -> &[Node] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Node) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> std::ops::Range<Node> {
        0..self.n()
    }

    /// Validated node set over this graph's universe.
    pub fn node_set<I>(&self, nodes: I) -> Result<NodeSet, GraphError>
    where
        I: IntoIterator<Item = Node>,
    {
        NodeSet::try_from_nodes(self.n(), nodes)
    }

    /// `nbr(R)`: nodes outside `R` with a neighbor in `R`.
    pub fn neighborhood(&self, region: &NodeSet) -> NodeSet {
        self.check_universe(region);
        let mut out = NodeSet::new(self.n());
        for u in region.iter() {
            for &v in &self.adj[u] {
                if !region.contains(v) {
                    out.insert(v);
                }
            }
        }
        out
    }

    /// `ext(R) = nbr(V \ R)`: nodes of `R` adjacent to some node outside `R`.
    pub fn exterior(&self, region: &NodeSet) -> NodeSet {
        self.check_universe(region);
        let mut out = NodeSet::new(self.n());
        for u in region.iter() {
            if self.adj[u].iter().any(|&v| !region.contains(v)) {
                out.insert(u);
            }
        }
        out
    }

    /// `S ∪ nbr(S)`.
    pub fn closed_neighborhood(&self, set: &NodeSet) -> NodeSet {
        let mut out = set.clone();
        out.union_with(&self.neighborhood(set));
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_of(0, &NodeSet::full(self.n())).len() == self.n()
    }

    /// Whether `set` induces a connected subgraph. The empty set counts as connected.
    pub fn induces_connected(&self, set: &NodeSet) -> bool {
        match set.iter().next() {
            None => true,
            Some(start) => self.component_of(start, set).len() == set.len(),
        }
    }

    /// Nodes reachable from `start` inside `within`.
    pub fn component_of(&self, start: Node, within: &NodeSet) -> NodeSet {
        let mut seen = NodeSet::new(self.n());
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if within.contains(v) && seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m() == self.n() - 1 && self.is_connected()
    }

    /// Multi-source BFS distances; `usize::MAX` marks unreachable nodes.
    pub fn distances_from(&self, sources: impl IntoIterator<Item = Node>) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = std::collections::VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Canonical edge set, `(min, max)` pairs in ascending order.
    pub fn canonical_edges(&self) -> Vec<(Node, Node)> {
        let mut e: Vec<_> = self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        e.sort_unstable();
        e
    }

    fn check_universe(&self, set: &NodeSet) {
        assert_eq!(
            set.universe(),
            self.n(),
            "node set universe does not match graph order"
        );
    }
}

impl PartialEq for UndirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.canonical_edges() == other.canonical_edges()
    }
}

impl Eq for UndirectedGraph {}

/// Index of an arc in a [`DirectedGraph`] (its position in insertion order).
pub type ArcId = usize;

/// Simple digraph. Antiparallel arc pairs are allowed; loops and duplicate
/// arcs are not.
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    arcs: Vec<(Node, Node)>,
    /// Sorted `(head, arc id)` per tail.
    out: Vec<Vec<(Node, ArcId)>>,
    /// Sorted `(tail, arc id)` per head.
    inc: Vec<Vec<(Node, ArcId)>>,
}

impl DirectedGraph {
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Node, Node)>,
    {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut list = Vec::new();
        let mut seen = HashSet::new();
        for (u, v) in arcs {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { node: u });
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            let id = list.len();
            list.push((u, v));
            out[u].push((v, id));
            inc[v].push((u, id));
        }
        for l in out.iter_mut().chain(inc.iter_mut()) {
            l.sort_unstable();
        }
        Ok(DirectedGraph {
            arcs: list,
            out,
            inc,
        })
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(Node, Node)] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> (Node, Node) {
        self.arcs[id]
    }

    pub fn out_arcs(&self, v: Node) -> &[(Node, ArcId)] {
        &self.out[v]
    }

    pub fn in_arcs(&self, v: Node) -> &[(Node, ArcId)] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: Node) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: Node) -> usize {
        self.inc[v].len()
    }

    pub fn out_neighbors(&self, v: Node) -> impl Iterator<Item = Node> + '_ {
        self.out[v].iter().map(|&(w, _)| w)
    }

    pub fn arc_id(&self, u: Node, v: Node) -> Option<ArcId> {
        let list = self.out.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_arc(&self, u: Node, v: Node) -> bool {
        self.arc_id(u, v).is_some()
    }

    pub fn node_set<I>(&self, nodes: I) -> Result<NodeSet, GraphError>
    where
        I: IntoIterator<Item = Node>,
    {
        NodeSet::try_from_nodes(self.n(), nodes)
    }

    /// Forgets arc directions and merges the parallel edges that creates.
    pub fn underlying_undirected(&self) -> UndirectedGraph {
        let mut seen = HashSet::new();
        let edges: Vec<_> = self
            .arcs
            .iter()
            .filter(|&&(u, v)| seen.insert((u.min(v), u.max(v))))
            .copied()
            .collect();
        UndirectedGraph::from_edges(self.n(), edges).expect("arcs were validated")
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indeg: Vec<usize> = (0..self.n()).map(|v| self.in_degree(v)).collect();
        let mut stack: Vec<Node> = (0..self.n()).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(u) = stack.pop() {
            removed += 1;
            for &(v, _) in &self.out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        removed == self.n()
    }

    pub fn canonical_arcs(&self) -> Vec<(Node, Node)> {
        let mut a = self.arcs.clone();
        a.sort_unstable();
        a
    }
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.canonical_arcs() == other.canonical_arcs()
    }
}

impl Eq for DirectedGraph {}
