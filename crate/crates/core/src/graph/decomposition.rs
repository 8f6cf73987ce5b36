use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use super::{GraphError, Node, NodeSet, TNode, UndirectedGraph};

/// First violated tree-decomposition condition, with a witness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdViolation {
    #[error("decomposition has no bags")]
    Empty,
    #[error("decomposition is over {td} nodes but the graph has {graph}")]
    UniverseMismatch { td: usize, graph: usize },
    #[error("T-node graph is not a tree: {0}")]
    NotATree(String),
    #[error("(T1) node {node} is in no bag")]
    NodeNotCovered { node: Node },
    #[error("(T1) edge {u}-{v} has no bag containing both ends")]
    EdgeNotCovered { u: Node, v: Node },
    #[error("(T2) node {node} is in bags {i} and {k} but not in bag {j} on the path between them")]
    NotConnected {
        node: Node,
        i: TNode,
        j: TNode,
        k: TNode,
    },
    #[error("T-node {tnode} is not a valid nice node: {reason}")]
    NotNice { tnode: TNode, reason: String },
    #[error("unknown T-node {0}")]
    UnknownTNode(TNode),
}

/// Bags indexed by T-node plus the tree on T-nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    n: usize,
    bags: Vec<Vec<Node>>,
    edges: Vec<(TNode, TNode)>,
    adj: Vec<Vec<TNode>>,
    root: Option<TNode>,
}

/// Parent/children view of a decomposition tree hung from a root.
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub root: TNode,
    pub parent: Vec<Option<TNode>>,
    pub children: Vec<Vec<TNode>>,
    pub depth: Vec<usize>,
    /// BFS order from the root.
    pub order: Vec<TNode>,
}

impl RootedTree {
    /// Roots the tree given by `adj` at `root`. Assumes `adj` is a tree.
    pub fn new(adj: &[Vec<TNode>], root: TNode) -> Self {
        let t = adj.len();
        let mut parent = vec![None; t];
        let mut children = vec![Vec::new(); t];
        let mut depth = vec![0; t];
        let mut seen = vec![false; t];
        let mut order = Vec::with_capacity(t);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut next: Vec<_> = adj[u].iter().copied().filter(|&v| !seen[v]).collect();
            next.sort_unstable();
            for v in next {
                seen[v] = true;
                parent[v] = Some(u);
                depth[v] = depth[u] + 1;
                children[u].push(v);
                queue.push_back(v);
            }
        }
        RootedTree {
            root,
            parent,
            children,
            depth,
            order,
        }
    }

    /// Children before parents.
    pub fn post_order(&self) -> impl Iterator<Item = TNode> + '_ {
        self.order.iter().rev().copied()
    }
}

impl TreeDecomposition {
    /// Checks only that ids are in range and bags have no repeated node;
    /// use [`TreeDecomposition::validate`] for the decomposition conditions.
    pub fn new(
        n: usize,
        bags: Vec<Vec<Node>>,
        edges: Vec<(TNode, TNode)>,
    ) -> Result<Self, GraphError> {
        let t = bags.len();
        for bag in &bags {
            let mut seen = BTreeSet::new();
            for &v in bag {
                if v >= n {
                    return Err(GraphError::NodeOutOfRange { node: v, n });
                }
                if !seen.insert(v) {
                    return Err(GraphError::DuplicateEdge { u: v, v });
                }
            }
        }
        let mut adj = vec![Vec::new(); t];
        for &(i, j) in &edges {
            for x in [i, j] {
                if x >= t {
                    return Err(GraphError::NodeOutOfRange { node: x, n: t });
                }
            }
            if i == j {
                return Err(GraphError::SelfLoop { node: i });
            }
            adj[i].push(j);
            adj[j].push(i);
        }
        Ok(TreeDecomposition {
            n,
            bags,
            edges,
            adj,
            root: None,
        })
    }

    pub fn with_root(mut self, root: TNode) -> Self {
        self.root = Some(root);
        self
    }

    /// Caller-specified root, or T-node 0.
    pub fn root(&self) -> TNode {
        self.root.unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn bags(&self) -> &[Vec<Node>] {
        &self.bags
    }

    pub fn bag(&self, i: TNode) -> &[Node] {
        &self.bags[i]
    }

    pub fn tree_edges(&self) -> &[(TNode, TNode)] {
        &self.edges
    }

    pub fn tree_neighbors(&self, i: TNode) -> &[TNode] {
        &self.adj[i]
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn rooted(&self, root: TNode) -> RootedTree {
        RootedTree::new(&self.adj, root)
    }

    /// Checks (T1) and (T2) against `g`; returns the width on success.
    pub fn validate(&self, g: &UndirectedGraph) -> Result<usize, TdViolation> {
        if self.n != g.n() {
            return Err(TdViolation::UniverseMismatch {
                td: self.n,
                graph: g.n(),
            });
        }
        self.check_tree()?;
        let holders = self.holders();
        if let Some(node) = (0..self.n).find(|&v| holders[v].is_empty()) {
            return Err(TdViolation::NodeNotCovered { node });
        }
        for &(u, v) in g.edges() {
            let covered = holders[u].iter().any(|&i| self.bags[i].contains(&v));
            if !covered {
                return Err(TdViolation::EdgeNotCovered { u, v });
            }
        }
        self.check_connectivity(&holders)?;
        Ok(self.width())
    }

    /// The graph-independent part of validation: tree shape and (T2).
    pub fn check_structure(&self) -> Result<(), TdViolation> {
        self.check_tree()?;
        self.check_connectivity(&self.holders())
    }

    fn holders(&self) -> Vec<Vec<TNode>> {
        let mut holders = vec![Vec::new(); self.n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                holders[v].push(i);
            }
        }
        holders
    }

    fn check_tree(&self) -> Result<(), TdViolation> {
        let t = self.bags.len();
        if t == 0 {
            return Err(TdViolation::Empty);
        }
        if self.edges.len() != t - 1 {
            return Err(TdViolation::NotATree(format!(
                "{} T-nodes but {} tree edges",
                t,
                self.edges.len()
            )));
        }
        let reached = self.rooted(0).order.len();
        if reached != t {
            return Err(TdViolation::NotATree(format!(
                "only {reached} of {t} T-nodes are connected"
            )));
        }
        if let Some(r) = self.root {
            if r >= t {
                return Err(TdViolation::UnknownTNode(r));
            }
        }
        Ok(())
    }

    /// (T2): the T-nodes holding each graph node form a subtree.
    fn check_connectivity(&self, holders: &[Vec<TNode>]) -> Result<(), TdViolation> {
        let t = self.bags.len();
        let mut mark = vec![usize::MAX; t];
        for (v, hold) in holders.iter().enumerate() {
            let Some(&start) = hold.first() else { continue };
            for &i in hold {
                mark[i] = v;
            }
            let mut seen = vec![false; t];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if mark[w] == v && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            if let Some(&k) = hold.iter().find(|&&i| !seen[i]) {
                let path = self.tree_path(start, k);
                let j = *path
                    .iter()
                    .find(|&&x| mark[x] != v)
                    .expect("disconnected holders imply a gap on the path");
                return Err(TdViolation::NotConnected {
                    node: v,
                    i: start,
                    j,
                    k,
                });
            }
        }
        Ok(())
    }

    fn tree_path(&self, from: TNode, to: TNode) -> Vec<TNode> {
        let rooted = self.rooted(from);
        let mut path = vec![to];
        let mut cur = to;
        while let Some(p) = rooted.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Union of the bags in the subtree of `q` when the tree hangs from `root`.
    pub fn subtree_union(&self, root: TNode, q: TNode) -> Result<NodeSet, TdViolation> {
        if q >= self.len() {
            return Err(TdViolation::UnknownTNode(q));
        }
        if root >= self.len() {
            return Err(TdViolation::UnknownTNode(root));
        }
        let rooted = self.rooted(root);
        let mut out = NodeSet::new(self.n);
        let mut stack = vec![q];
        while let Some(u) = stack.pop() {
            for &v in &self.bags[u] {
                out.insert(v);
            }
            stack.extend(rooted.children[u].iter().copied());
        }
        Ok(out)
    }

    /// Converts to a nice decomposition rooted at `root`.
    ///
    /// Leaves get empty bags; every original bag appears as the bag of some
    /// nice node, and the width is unchanged.
    pub fn to_nice(&self, root: TNode) -> Result<NiceTreeDecomposition, TdViolation> {
        self.check_structure()?;
        if root >= self.len() {
            return Err(TdViolation::UnknownTNode(root));
        }
        let rooted = self.rooted(root);
        let mut builder = NiceBuilder { nodes: Vec::new() };
        // top[i] = nice node carrying exactly bag(i), built bottom-up
        let mut top = vec![usize::MAX; self.len()];
        let sorted: Vec<Vec<Node>> = self
            .bags
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        for i in rooted.post_order() {
            let target = &sorted[i];
            let mut branches: Vec<TNode> = rooted.children[i]
                .iter()
                .map(|&c| builder.bridge(top[c], target))
                .collect();
            top[i] = match branches.len() {
                0 => {
                    let leaf = builder.push(Vec::new(), NiceKind::Leaf, vec![]);
                    builder.bridge(leaf, target)
                }
                _ => {
                    let mut acc = branches.remove(0);
                    for b in branches {
                        acc = builder.push(target.clone(), NiceKind::Join, vec![acc, b]);
                    }
                    acc
                }
            };
        }
        Ok(NiceTreeDecomposition {
            n: self.n,
            nodes: builder.nodes,
            root: top[root],
        })
    }
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, bag: Vec<Node>, kind: NiceKind, children: Vec<TNode>) -> TNode {
        self.nodes.push(NiceNode {
            bag,
            kind,
            children,
        });
        self.nodes.len() - 1
    }

    /// Forget/insert chain from the bag of `from` to `target` (both sorted).
    fn bridge(&mut self, from: TNode, target: &[Node]) -> TNode {
        let mut cur = from;
        let mut bag = self.nodes[from].bag.clone();
        let forget: Vec<Node> = bag.iter().copied().filter(|v| !target.contains(v)).collect();
        for x in forget {
            bag.retain(|&v| v != x);
            cur = self.push(bag.clone(), NiceKind::Forget(x), vec![cur]);
        }
        let insert: Vec<Node> = target.iter().copied().filter(|v| !bag.contains(v)).collect();
        for x in insert {
            let pos = bag.partition_point(|&v| v < x);
            bag.insert(pos, x);
            cur = self.push(bag.clone(), NiceKind::Insert(x), vec![cur]);
        }
        cur
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NiceKind {
    Leaf,
    Insert(Node),
    Forget(Node),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    /// Sorted ascending.
    pub bag: Vec<Node>,
    pub kind: NiceKind,
    pub children: Vec<TNode>,
}

/// Rooted decomposition whose nodes are Leaf, Insert, Forget or Join.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    n: usize,
    nodes: Vec<NiceNode>,
    root: TNode,
}

impl NiceTreeDecomposition {
    pub fn from_parts(
        n: usize,
        nodes: Vec<NiceNode>,
        root: TNode,
    ) -> Result<Self, TdViolation> {
        if root >= nodes.len() {
            return Err(TdViolation::UnknownTNode(root));
        }
        let nice = NiceTreeDecomposition { n, nodes, root };
        nice.check_kinds()?;
        nice.to_tree_decomposition().check_structure()?;
        Ok(nice)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, i: TNode) -> &NiceNode {
        &self.nodes[i]
    }

    pub fn root(&self) -> TNode {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|x| x.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Children before parents.
    pub fn post_order(&self) -> Vec<TNode> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            order.push(u);
            stack.extend(self.nodes[u].children.iter().copied());
        }
        order.reverse();
        order
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|x| x.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, x)| x.children.iter().map(move |&c| (i, c)))
            .collect();
        TreeDecomposition::new(self.n, bags, edges)
            .expect("nice nodes reference valid ids")
            .with_root(self.root)
    }

    /// Checks node kinds and that the underlying decomposition is valid for `g`.
    pub fn validate(&self, g: &UndirectedGraph) -> Result<usize, TdViolation> {
        self.check_kinds()?;
        self.to_tree_decomposition().validate(g)
    }

    fn check_kinds(&self) -> Result<(), TdViolation> {
        let bad = |tnode: TNode, reason: &str| TdViolation::NotNice {
            tnode,
            reason: reason.to_string(),
        };
        for (i, node) in self.nodes.iter().enumerate() {
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad(i, "bag not sorted"));
            }
            let child_bag = |k: usize| &self.nodes[node.children[k]].bag;
            match node.kind {
                NiceKind::Leaf => {
                    if !node.children.is_empty() {
                        return Err(bad(i, "leaf with children"));
                    }
                }
                NiceKind::Join => {
                    if node.children.len() != 2 {
                        return Err(bad(i, "join needs two children"));
                    }
                    if child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return Err(bad(i, "join children bags differ"));
                    }
                }
                NiceKind::Insert(x) => {
                    if node.children.len() != 1 {
                        return Err(bad(i, "insert needs one child"));
                    }
                    let c = child_bag(0);
                    let expect: Vec<Node> = node.bag.iter().copied().filter(|&v| v != x).collect();
                    if !node.bag.contains(&x) || c.contains(&x) || *c != expect {
                        return Err(bad(i, "insert bag must be child bag plus one node"));
                    }
                }
                NiceKind::Forget(x) => {
                    if node.children.len() != 1 {
                        return Err(bad(i, "forget needs one child"));
                    }
                    let c = child_bag(0);
                    let expect: Vec<Node> = c.iter().copied().filter(|&v| v != x).collect();
                    if node.bag.contains(&x) || !c.contains(&x) || node.bag != expect {
                        return Err(bad(i, "forget bag must be child bag minus one node"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Decomposition from an elimination ordering (min-degree when `order` is `None`).
///
/// A convenience for tests and small inputs; the result is valid but its
/// width is whatever the ordering gives.
pub fn elimination_decomposition(g: &UndirectedGraph, order: Option<&[Node]>) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(0, vec![vec![]], vec![]).expect("single empty bag");
    }
    let mut fill: Vec<BTreeSet<Node>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![0; n];
    let mut sequence = Vec::with_capacity(n);
    for step in 0..n {
        let v = match order {
            Some(o) => o[step],
            None => (0..n)
                .filter(|&v| !eliminated[v])
                .min_by_key(|&v| (fill[v].len(), v))
                .expect("nodes remain"),
        };
        eliminated[v] = true;
        position[v] = step;
        sequence.push(v);
        let later: Vec<Node> = fill[v].iter().copied().collect();
        for &a in &later {
            fill[a].remove(&v);
            for &b in &later {
                if a != b {
                    fill[a].insert(b);
                }
            }
        }
        fill[v] = later.into_iter().collect();
    }
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (step, &v) in sequence.iter().enumerate() {
        let mut bag: Vec<Node> = std::iter::once(v).chain(fill[v].iter().copied()).collect();
        bag.sort_unstable();
        bags.push(bag);
        match fill[v].iter().min_by_key(|&&u| position[u]) {
            Some(&u) => edges.push((step, position[u])),
            None => roots.push(step),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(n, bags, edges).expect("elimination bags are in range")
}
