//! Greedy, proximity greedy, cleanup, and the block-partition algorithm.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Node, NodeSet, UndirectedGraph};
use crate::propagation::{closure, is_feasible, Propagator};

/// How to choose among nodes with equal gain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "seed")]
pub enum TieBreak {
    /// Lowest id.
    Lexicographic,
    /// Farthest (in hops) from every earlier pick and from the periphery,
    /// then lowest id. The periphery is the set of nodes with degree at
    /// least 3 but below the maximum degree, i.e. the border of a
    /// (subdivided) grid.
    AdversarialCenterFirst,
    /// Uniform among the tied nodes, driven by a seeded stream.
    SeededRandom(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeuristicError {
    #[error("input set is not power dominating")]
    Infeasible,
    #[error("partition needs at least 2 nodes, graph has {0}")]
    TooSmall(usize),
}

/// Picks in order, each with the number of nodes it newly dominated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyRun {
    pub picks: Vec<Node>,
    pub gains: Vec<usize>,
}

impl GreedyRun {
    pub fn solution(&self, n: usize) -> NodeSet {
        NodeSet::from_nodes(n, self.picks.iter().copied())
    }
}

struct Chooser {
    mode: TieBreak,
    rng: Option<ChaCha8Rng>,
    periphery: Vec<Node>,
}

impl Chooser {
    fn new(g: &UndirectedGraph, mode: TieBreak) -> Self {
        let rng = match mode {
            TieBreak::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let periphery = match mode {
            TieBreak::AdversarialCenterFirst => {
                let top = g.max_degree();
                g.nodes().filter(|&v| (3..top).contains(&g.degree(v))).collect()
            }
            _ => Vec::new(),
        };
        Chooser { mode, rng, periphery }
    }

    /// `tied` is ascending and non-empty.
    fn choose(&mut self, g: &UndirectedGraph, picks: &[Node], tied: &[Node]) -> Node {
        match self.mode {
            TieBreak::Lexicographic => tied[0],
            TieBreak::AdversarialCenterFirst => {
                let dist = g.distances_from(picks.iter().chain(&self.periphery).copied());
                *tied
                    .iter()
                    .max_by_key(|&&v| (dist[v], std::cmp::Reverse(v)))
                    .expect("non-empty")
            }
            TieBreak::SeededRandom(_) => *tied
                .choose(self.rng.as_mut().expect("seeded mode has a stream"))
                .expect("non-empty"),
        }
    }
}

/// Gain of every node with positive gain over the current state.
fn gains(base: &Propagator<'_, UndirectedGraph>, g: &UndirectedGraph) -> Vec<(Node, NodeSet)> {
    let dominated = base.dominated();
    let mut out = Vec::new();
    for v in g.nodes() {
        let fresh = !dominated.contains(v) || g.neighbors(v).iter().any(|&w| !dominated.contains(w));
        if !fresh {
            continue;
        }
        let mut p = base.clone();
        p.seed(v);
        p.propagate();
        out.push((v, p.into_dominated()));
    }
    out
}

fn run(g: &UndirectedGraph, tiebreak: TieBreak, connected_only: bool) -> GreedyRun {
    let mut chooser = Chooser::new(g, tiebreak);
    let mut base = Propagator::new(g);
    let mut run = GreedyRun {
        picks: Vec::new(),
        gains: Vec::new(),
    };
    while !base.is_complete() {
        let options = gains(&base, g);
        let restricted: Vec<&(Node, NodeSet)> = if connected_only && !run.picks.is_empty() {
            options.iter().filter(|(_, d)| g.induces_connected(d)).collect()
        } else {
            Vec::new()
        };
        let pool: Vec<&(Node, NodeSet)> = if restricted.is_empty() {
            options.iter().collect()
        } else {
            restricted
        };
        let best = pool.iter().map(|(_, d)| d.len()).max().expect("an undominated node exists");
        let tied: Vec<Node> = pool.iter().filter(|(_, d)| d.len() == best).map(|(v, _)| *v).collect();
        let v = chooser.choose(g, &run.picks, &tied);
        let before = base.count();
        base.seed(v);
        base.propagate();
        run.picks.push(v);
        run.gains.push(base.count() - before);
    }
    run
}

/// Repeatedly adds the node that newly dominates the most nodes.
pub fn greedy_run(g: &UndirectedGraph, tiebreak: TieBreak) -> GreedyRun {
    run(g, tiebreak, false)
}

pub fn greedy(g: &UndirectedGraph, tiebreak: TieBreak) -> NodeSet {
    greedy_run(g, tiebreak).solution(g.n())
}

/// Greedy restricted to picks that keep the dominated set connected.
///
/// The first pick ranges over all nodes. When no pick keeps the dominated
/// set connected, one unrestricted greedy step is taken instead.
pub fn proximity_run(g: &UndirectedGraph, tiebreak: TieBreak) -> GreedyRun {
    run(g, tiebreak, true)
}

pub fn proximity_greedy(g: &UndirectedGraph, tiebreak: TieBreak) -> NodeSet {
    proximity_run(g, tiebreak).solution(g.n())
}

/// Drops nodes of a feasible set in the given order while it stays feasible.
/// Nodes of `s` missing from `order` are tried afterwards in ascending order.
pub fn cleanup(g: &UndirectedGraph, s: &NodeSet, order: &[Node]) -> Result<NodeSet, HeuristicError> {
    if !is_feasible(g, s) {
        return Err(HeuristicError::Infeasible);
    }
    let mut scan: Vec<Node> = order.iter().copied().filter(|&v| s.contains(v)).collect();
    let listed = NodeSet::from_nodes(g.n(), scan.iter().copied());
    scan.extend(s.iter().filter(|&v| !listed.contains(v)));
    let mut cur = s.clone();
    loop {
        let mut changed = false;
        for &v in &scan {
            if cur.remove(v) {
                if is_feasible(g, &cur) {
                    changed = true;
                } else {
                    cur.insert(v);
                }
            }
        }
        if !changed {
            return Ok(cur);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionResult {
    pub solution: NodeSet,
    pub blocks: Vec<Vec<Node>>,
    pub candidates_examined: usize,
}

/// Splits the ids into `⌈log₂ n⌉` contiguous blocks and returns the smallest
/// feasible union of blocks.
pub fn partition_approx(g: &UndirectedGraph) -> Result<PartitionResult, HeuristicError> {
    let n = g.n();
    if n < 2 {
        return Err(HeuristicError::TooSmall(n));
    }
    let k = n.next_power_of_two().trailing_zeros() as usize;
    let blocks: Vec<Vec<Node>> = (0..k)
        .map(|i| (i * n / k..(i + 1) * n / k).collect())
        .collect();
    let mut best: Option<NodeSet> = None;
    let mut examined = 0;
    for mask in 0..1usize << k {
        examined += 1;
        let union = NodeSet::from_nodes(
            n,
            (0..k).filter(|i| mask >> i & 1 == 1).flat_map(|i| blocks[i].iter().copied()),
        );
        if best.as_ref().is_some_and(|b| b.len() <= union.len()) {
            continue;
        }
        if closure(g, &union).is_full() {
            best = Some(union);
        }
    }
    Ok(PartitionResult {
        solution: best.expect("the union of all blocks is V"),
        blocks,
        candidates_examined: examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn star() -> UndirectedGraph {
        UndirectedGraph::from_edges(6, (1..6).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn star_and_path() {
        assert_eq!(greedy(&star(), TieBreak::Lexicographic).to_vec(), vec![0]);
        assert_eq!(proximity_greedy(&path(5), TieBreak::Lexicographic).len(), 1);
    }

    #[test]
    fn gains_are_positive() {
        let run = greedy_run(&path(9), TieBreak::SeededRandom(3));
        assert!(run.gains.iter().all(|&x| x >= 1));
        assert_eq!(run.gains.iter().sum::<usize>(), 9);
    }

    #[test]
    fn cleanup_examples() {
        let g = path(5);
        let all: Vec<Node> = (0..5).collect();
        assert_eq!(cleanup(&g, &NodeSet::full(5), &all).unwrap().len(), 1);
        let one = NodeSet::from_nodes(5, [2]);
        assert_eq!(cleanup(&g, &one, &[2]).unwrap(), one);
        assert_eq!(
            cleanup(&g, &NodeSet::new(5), &[]),
            Err(HeuristicError::Infeasible)
        );
    }

    #[test]
    fn partition_counts() {
        let r = partition_approx(&path(8)).unwrap();
        assert_eq!(r.candidates_examined, 8);
        assert_eq!(r.blocks.len(), 3);
        assert!(is_feasible(&path(8), &r.solution));
        assert_eq!(partition_approx(&path(1)), Err(HeuristicError::TooSmall(1)));
        let blocks = partition_approx(&path(7)).unwrap().blocks;
        let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![2, 2, 3]);
    }
}
