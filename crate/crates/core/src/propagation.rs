//! Closure under the two power-domination rules.
//!
//! Rule 1 puts a seed and its (out-)neighbors into the dominated set. Rule 2
//! lets a dominated node with exactly one undominated (out-)neighbor force
//! that neighbor. The engine is shared by the undirected and directed
//! variants through [`Adjacency`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::graph::{DirectedGraph, Node, NodeSet, UndirectedGraph};

/// Which nodes a node dominates (`forward`) and which nodes see it as a
/// forward neighbor (`backward`).
pub trait Adjacency {
    fn order(&self) -> usize;
    fn forward(&self, v: Node) -> impl Iterator<Item = Node> + '_;
    fn backward(&self, v: Node) -> impl Iterator<Item = Node> + '_;
    fn forward_degree(&self, v: Node) -> usize;
}

impl Adjacency for UndirectedGraph {
    fn order(&self) -> usize {
        self.n()
    }
    fn forward(&self, v: Node) -> impl Iterator<Item = Node> + '_ {
        self.neighbors(v).iter().copied()
    }
    fn backward(&self, v: Node) -> impl Iterator<Item = Node> + '_ {
        self.neighbors(v).iter().copied()
    }
    fn forward_degree(&self, v: Node) -> usize {
        self.degree(v)
    }
}

impl Adjacency for DirectedGraph {
    fn order(&self) -> usize {
        self.n()
    }
    fn forward(&self, v: Node) -> impl Iterator<Item = Node> + '_ {
        self.out_arcs(v).iter().map(|&(w, _)| w)
    }
    fn backward(&self, v: Node) -> impl Iterator<Item = Node> + '_ {
        self.in_arcs(v).iter().map(|&(w, _)| w)
    }
    fn forward_degree(&self, v: Node) -> usize {
        self.out_degree(v)
    }
}

/// Incremental closure state. Cloning is cheap enough to evaluate many
/// candidate extensions of one base set.
pub struct Propagator<'g, G: Adjacency> {
    g: &'g G,
    dominated: NodeSet,
    /// Undominated forward neighbors per node.
    open: Vec<u32>,
    exterior: usize,
    ready: BinaryHeap<Reverse<Node>>,
}

impl<G: Adjacency> Clone for Propagator<'_, G> {
    fn clone(&self) -> Self {
        Propagator {
            g: self.g,
            dominated: self.dominated.clone(),
            open: self.open.clone(),
            exterior: self.exterior,
            ready: self.ready.clone(),
        }
    }
}

impl<'g, G: Adjacency> Propagator<'g, G> {
    pub fn new(g: &'g G) -> Self {
        let n = g.order();
        Propagator {
            g,
            dominated: NodeSet::new(n),
            open: (0..n).map(|v| g.forward_degree(v) as u32).collect(),
            exterior: 0,
            ready: BinaryHeap::new(),
        }
    }

    pub fn dominated(&self) -> &NodeSet {
        &self.dominated
    }

    pub fn into_dominated(self) -> NodeSet {
        self.dominated
    }

    pub fn count(&self) -> usize {
        self.dominated.len()
    }

    pub fn is_complete(&self) -> bool {
        self.dominated.is_full()
    }

    /// Dominated nodes that still have an undominated forward neighbor.
    pub fn exterior_size(&self) -> usize {
        self.exterior
    }

    /// Marks `w` dominated without applying any rule. Returns whether it was new.
    pub fn dominate(&mut self, w: Node) -> bool {
        if !self.dominated.insert(w) {
            return false;
        }
        if self.open[w] > 0 {
            self.exterior += 1;
        }
        if self.open[w] == 1 {
            self.ready.push(Reverse(w));
        }
        for x in self.g.backward(w) {
            self.open[x] -= 1;
            if self.dominated.contains(x) {
                match self.open[x] {
                    0 => self.exterior -= 1,
                    1 => self.ready.push(Reverse(x)),
                    _ => {}
                }
            }
        }
        true
    }

    /// Rule 1 for `v`. Returns the newly dominated nodes.
    pub fn seed(&mut self, v: Node) -> Vec<Node> {
        let mut added = Vec::new();
        if self.dominate(v) {
            added.push(v);
        }
        let targets: Vec<Node> = self.g.forward(v).collect();
        for w in targets {
            if self.dominate(w) {
                added.push(w);
            }
        }
        added
    }

    /// One Rule 2 application by the smallest eligible actor.
    pub fn step(&mut self) -> Option<(Node, Node)> {
        while let Some(Reverse(v)) = self.ready.pop() {
            if self.open[v] != 1 {
                continue;
            }
            let target = self
                .g
                .forward(v)
                .find(|&w| !self.dominated.contains(w))
                .expect("open count says one neighbor is undominated");
            self.dominate(target);
            return Some((v, target));
        }
        None
    }

    /// Applies Rule 2 to a fixpoint.
    pub fn propagate(&mut self) {
        while self.step().is_some() {}
    }
}

/// Closure of `seeds` under both rules.
pub fn closure<G: Adjacency>(g: &G, seeds: &NodeSet) -> NodeSet {
    assert_eq!(seeds.universe(), g.order(), "seed set universe does not match graph");
    let mut p = Propagator::new(g);
    for v in seeds.iter() {
        p.seed(v);
    }
    p.propagate();
    p.into_dominated()
}

/// Rule 2 fixpoint starting from an already dominated set (no Rule 1).
pub fn extend_dominated<G: Adjacency>(g: &G, dominated: &NodeSet) -> NodeSet {
    assert_eq!(dominated.universe(), g.order(), "set universe does not match graph");
    let mut p = Propagator::new(g);
    for v in dominated.iter() {
        p.dominate(v);
    }
    p.propagate();
    p.into_dominated()
}

pub fn is_feasible<G: Adjacency>(g: &G, seeds: &NodeSet) -> bool {
    closure(g, seeds).is_full()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    R1,
    R2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub actor: Node,
    pub added: Vec<Node>,
}

/// Staged closure: stage 0 is the Rule 1 result and every later stage adds
/// the single node forced by one Rule 2 step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominationTrace {
    pub stages: Vec<NodeSet>,
    pub steps: Vec<TraceStep>,
    pub exteriors: Vec<usize>,
}

impl DominationTrace {
    pub fn closure(&self) -> &NodeSet {
        self.stages.last().expect("a trace has at least stage 0")
    }

    pub fn rule2_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.rule == Rule::R2).count()
    }
}

pub fn closure_trace<G: Adjacency>(g: &G, seeds: &NodeSet) -> DominationTrace {
    assert_eq!(seeds.universe(), g.order(), "seed set universe does not match graph");
    let mut p = Propagator::new(g);
    let mut steps = Vec::new();
    for v in seeds.iter() {
        let added = p.seed(v);
        steps.push(TraceStep {
            rule: Rule::R1,
            actor: v,
            added,
        });
    }
    let mut stages = vec![p.dominated().clone()];
    let mut exteriors = vec![p.exterior_size()];
    while let Some((actor, target)) = p.step() {
        steps.push(TraceStep {
            rule: Rule::R2,
            actor,
            added: vec![target],
        });
        stages.push(p.dominated().clone());
        exteriors.push(p.exterior_size());
    }
    DominationTrace {
        stages,
        steps,
        exteriors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn set(n: usize, v: &[Node]) -> NodeSet {
        NodeSet::from_nodes(n, v.iter().copied())
    }

    #[test]
    fn path_from_endpoint() {
        let g = path(5);
        assert!(closure(&g, &set(5, &[0])).is_full());
        let t = closure_trace(&g, &set(5, &[0]));
        assert_eq!(t.rule2_steps(), 3);
        assert_eq!(t.stages[0].to_vec(), vec![0, 1]);
        assert_eq!(t.exteriors, vec![1, 1, 1, 0]);
    }

    #[test]
    fn empty_and_full_seeds() {
        let g = path(4);
        assert!(closure(&g, &NodeSet::new(4)).is_empty());
        assert!(!is_feasible(&g, &NodeSet::new(4)));
        let t = closure_trace(&g, &NodeSet::full(4));
        assert_eq!(t.stages.len(), 1);
        assert_eq!(t.rule2_steps(), 0);
    }

    #[test]
    fn star_center() {
        let g = UndirectedGraph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        assert!(is_feasible(&g, &set(6, &[0])));
        // a leaf dominates the center, which then has four open neighbors
        assert_eq!(closure(&g, &set(6, &[1])).to_vec(), vec![0, 1]);
    }

    #[test]
    fn isolated_seed_is_dominated() {
        let g = UndirectedGraph::empty(3);
        assert_eq!(closure(&g, &set(3, &[1])).to_vec(), vec![1]);
    }

    #[test]
    fn directed_rules() {
        let d = DirectedGraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(is_feasible(&d, &set(3, &[0])));
        assert_eq!(closure(&d, &set(3, &[1])).to_vec(), vec![1, 2]);
        // dominating 2 gives nothing back along the arc
        assert_eq!(closure(&d, &set(3, &[2])).to_vec(), vec![2]);
    }

    #[test]
    fn extend_from_dominated() {
        let g = path(4);
        assert!(extend_dominated(&g, &set(4, &[0, 1])).is_full());
        assert_eq!(extend_dominated(&g, &set(4, &[0])).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(extend_dominated(&g, &set(4, &[1])).to_vec(), vec![1]);
    }

    #[test]
    fn trace_json_shape() {
        let t = closure_trace(&path(3), &set(3, &[0]));
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["stages"][0], serde_json::json!([0, 1]));
        assert_eq!(json["steps"][1]["rule"], "R2");
        assert_eq!(json["exteriors"], serde_json::json!([1, 0]));
    }
}
