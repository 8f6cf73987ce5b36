//! Directed power domination: rules D1/D2, valid colorings, and a dynamic
//! program over nice tree decompositions of the underlying graph.
//!
//! A coloring splits the arcs into red and blue. It is valid when no two
//! antiparallel arcs are red, every node has red in-degree at most 1, a node
//! with red in-degree 1 has red out-degree at most 1, and there is no
//! dependency cycle: a closed walk that follows red arcs forwards and blue
//! arcs backwards without two consecutive blue arcs. The origins (nodes
//! without a red in-arc) of a valid coloring power dominate the graph, and
//! every power dominating set is the origin set of some valid coloring.

mod dp;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ArcId, DirectedGraph, Node, NodeSet};
use crate::propagation::{closure, Propagator};

pub use dp::{dp_solve, dp_solve_detailed, DpConfig, DpError, DpOutcome, TableCensus};

/// Closure of `s` under D1 (a seed dominates its out-neighbors) and D2 (a
/// dominated node with one undominated out-neighbor forces it).
pub fn directed_closure(d: &DirectedGraph, s: &NodeSet) -> NodeSet {
    closure(d, s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

/// One color per arc id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn uniform(m: usize, color: Color) -> Self {
        Coloring { colors: vec![color; m] }
    }

    pub fn from_colors(colors: Vec<Color>) -> Self {
        Coloring { colors }
    }

    /// Bit `i` of `mask` set means arc `i` is red. Needs `m <= 64`.
    pub fn from_red_mask(m: usize, mask: u64) -> Self {
        assert!(m <= 64, "mask covers at most 64 arcs");
        Coloring {
            colors: (0..m)
                .map(|i| if mask >> i & 1 == 1 { Color::Red } else { Color::Blue })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, arc: ArcId) -> Color {
        self.colors[arc]
    }

    pub fn is_red(&self, arc: ArcId) -> bool {
        self.colors[arc] == Color::Red
    }

    pub fn set(&mut self, arc: ArcId, color: Color) {
        self.colors[arc] = color;
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn red_arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.colors.iter().enumerate().filter(|(_, &c)| c == Color::Red).map(|(i, _)| i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Violation {
    #[error("coloring has {got} colors for {expected} arcs")]
    WrongLength { expected: usize, got: usize },
    #[error("antiparallel arcs {u}->{v} and {v}->{u} are both red")]
    AntiparallelRed { u: Node, v: Node },
    #[error("node {node} has {count} red in-arcs")]
    RedInDegree { node: Node, count: usize },
    #[error("node {node} has a red in-arc and {count} red out-arcs")]
    RedOutDegree { node: Node, count: usize },
    #[error("dependency cycle through {nodes:?}")]
    DependencyCycle { nodes: Vec<Node>, arcs: Vec<ArcId> },
}

/// Checks the three validity conditions in order and reports the first
/// violation found.
pub fn is_valid_coloring(d: &DirectedGraph, c: &Coloring) -> Result<(), Violation> {
    if c.len() != d.m() {
        return Err(Violation::WrongLength {
            expected: d.m(),
            got: c.len(),
        });
    }
    for a in c.red_arcs() {
        let (u, v) = d.arc(a);
        if u < v && d.arc_id(v, u).is_some_and(|b| c.is_red(b)) {
            return Err(Violation::AntiparallelRed { u, v });
        }
    }
    for v in 0..d.n() {
        let red_in = d.in_arcs(v).iter().filter(|&&(_, a)| c.is_red(a)).count();
        let red_out = d.out_arcs(v).iter().filter(|&&(_, a)| c.is_red(a)).count();
        if red_in > 1 {
            return Err(Violation::RedInDegree { node: v, count: red_in });
        }
        if red_in == 1 && red_out > 1 {
            return Err(Violation::RedOutDegree { node: v, count: red_out });
        }
    }
    match dependency_cycle(d, c) {
        Some((nodes, arcs)) => Err(Violation::DependencyCycle { nodes, arcs }),
        None => Ok(()),
    }
}

/// A dependency cycle as the visited nodes and the arcs between consecutive
/// ones (the last arc closes the cycle).
///
/// Searches the graph on pairs (node, color of the arc used to reach it): a
/// red arc `(u, v)` leads from `(u, *)` to `(v, R)`, a blue arc `(u, v)` is
/// walked backwards from `(v, R)` to `(u, B)`.
pub fn dependency_cycle(d: &DirectedGraph, c: &Coloring) -> Option<(Vec<Node>, Vec<ArcId>)> {
    let ports = 2 * d.n();
    let mut next: Vec<Vec<(usize, ArcId)>> = vec![Vec::new(); ports];
    for (a, &(u, v)) in d.arcs().iter().enumerate() {
        if c.is_red(a) {
            next[2 * u].push((2 * v, a));
            next[2 * u + 1].push((2 * v, a));
        } else {
            next[2 * v].push((2 * u + 1, a));
        }
    }
    // iterative DFS; 0 = new, 1 = on stack, 2 = done
    let mut mark = vec![0u8; ports];
    let mut via: Vec<(usize, ArcId)> = vec![(usize::MAX, 0); ports];
    for start in 0..ports {
        if mark[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        mark[start] = 1;
        while let Some(&mut (p, ref mut i)) = stack.last_mut() {
            if *i < next[p].len() {
                let (q, a) = next[p][*i];
                *i += 1;
                match mark[q] {
                    0 => {
                        mark[q] = 1;
                        via[q] = (p, a);
                        stack.push((q, 0));
                    }
                    1 => {
                        let mut nodes = vec![q / 2];
                        let mut arcs = vec![a];
                        let mut cur = p;
                        while cur != q {
                            let (prev, arc) = via[cur];
                            nodes.push(cur / 2);
                            arcs.push(arc);
                            cur = prev;
                        }
                        // collected backwards: arcs[k] enters nodes[k]
                        nodes.reverse();
                        arcs.reverse();
                        arcs.rotate_left(1);
                        return Some((nodes, arcs));
                    }
                    _ => {}
                }
            } else {
                mark[p] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Nodes without a red in-arc.
pub fn origins(d: &DirectedGraph, c: &Coloring) -> NodeSet {
    let mut s = NodeSet::full(d.n());
    for a in c.red_arcs() {
        s.remove(d.arc(a).1);
    }
    s
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("set does not power dominate the graph")]
pub struct Infeasible;

/// Colors arc `(v, w)` red when `w` is dominated by `v`, following the
/// canonical order: `S` is dominated first, then every `v ∈ S` in ascending
/// order claims its undominated out-neighbors, then D2 runs with the
/// smallest eligible actor first. The origins are exactly `S`.
pub fn coloring_from_domination(d: &DirectedGraph, s: &NodeSet) -> Result<Coloring, Infeasible> {
    let mut p = Propagator::new(d);
    let mut c = Coloring::uniform(d.m(), Color::Blue);
    for v in s.iter() {
        p.dominate(v);
    }
    for v in s.iter() {
        for &(w, a) in d.out_arcs(v) {
            if p.dominate(w) {
                c.set(a, Color::Red);
            }
        }
    }
    while let Some((v, w)) = p.step() {
        c.set(d.arc_id(v, w).expect("step follows an arc"), Color::Red);
    }
    if p.is_complete() {
        Ok(c)
    } else {
        Err(Infeasible)
    }
}
