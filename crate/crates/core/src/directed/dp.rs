//! Minimum number of origins of a valid coloring, by dynamic programming
//! over a nice tree decomposition of the underlying undirected graph.
//!
//! For a T-node `i` let `Y_i` be the nodes forgotten below it. A bag state
//! records
//!
//! * the color of every arc inside the bag,
//! * for every bag node the number of red arcs between it and `Y_i`
//!   (in: 0 or 1, out: 0, 1 or "2 or more"),
//! * for every ordered pair `(u, v)` of bag nodes the types (color of first
//!   and last arc) of dependency walks from `u` to `v` whose inner nodes all
//!   lie in `Y_i`.
//!
//! A table maps each reachable state to the fewest origins among the
//! forgotten nodes. Missing states are infeasible. Dependency cycles through
//! the bag are found on a small graph over (bag node, last color) ports
//! built from the bag arcs and the pair types.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use super::{origins, Color, Coloring};
use crate::exact::ExactResult;
use crate::graph::{ArcId, DirectedGraph, NiceKind, NiceTreeDecomposition, Node, TNode, TdViolation};

/// Bags larger than this do not fit the port bitmasks.
const HARD_WIDTH_LIMIT: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DpConfig {
    pub max_width: usize,
    pub max_states: usize,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig {
            max_width: 3,
            max_states: 2_000_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DpError {
    #[error(transparent)]
    Decomposition(#[from] TdViolation),
    #[error("decomposition width {width} exceeds the limit {limit}")]
    WidthTooLarge { width: usize, limit: usize },
    #[error("table at t-node {tnode} exceeds {limit} states")]
    TooManyStates { tnode: TNode, limit: usize },
}

/// Size of one table, for `--dump-states`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCensus {
    pub tnode: TNode,
    pub kind: &'static str,
    pub bag_size: usize,
    pub live_states: usize,
    pub min_value: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DpOutcome {
    pub result: ExactResult,
    pub coloring: Coloring,
    pub census: Vec<TableCensus>,
}

pub fn dp_solve(d: &DirectedGraph, ntd: &NiceTreeDecomposition, cfg: DpConfig) -> Result<ExactResult, DpError> {
    dp_solve_detailed(d, ntd, cfg).map(|o| o.result)
}

/// Runs the program and traces an optimal coloring back; the witness is its
/// origin set.
pub fn dp_solve_detailed(d: &DirectedGraph, ntd: &NiceTreeDecomposition, cfg: DpConfig) -> Result<DpOutcome, DpError> {
    let width = ntd.validate(&d.underlying_undirected())?;
    let limit = cfg.max_width.min(HARD_WIDTH_LIMIT);
    if width > limit {
        return Err(DpError::WidthTooLarge { width, limit });
    }
    let layouts: Vec<Layout> = ntd.nodes().iter().map(|t| Layout::new(d, &t.bag)).collect();
    let mut tables: Vec<Table> = (0..ntd.len()).map(|_| Table::default()).collect();
    let mut census = Vec::with_capacity(ntd.len());
    for i in ntd.post_order() {
        let node = ntd.node(i);
        let lay = &layouts[i];
        let table = match node.kind {
            NiceKind::Leaf => leaf(lay),
            NiceKind::Insert(x) => {
                let c = node.children[0];
                insert(&tables[c], &layouts[c], lay, x)
            }
            NiceKind::Forget(x) => {
                let c = node.children[0];
                forget(&tables[c], &layouts[c], lay, x)
            }
            NiceKind::Join => join(&tables[node.children[0]], &tables[node.children[1]], lay),
        };
        if table.entries.len() > cfg.max_states {
            return Err(DpError::TooManyStates {
                tnode: i,
                limit: cfg.max_states,
            });
        }
        census.push(TableCensus {
            tnode: i,
            kind: match node.kind {
                NiceKind::Leaf => "leaf",
                NiceKind::Insert(_) => "insert",
                NiceKind::Forget(_) => "forget",
                NiceKind::Join => "join",
            },
            bag_size: lay.bag.len(),
            live_states: table.entries.len(),
            min_value: table.entries.iter().map(|e| e.value).min(),
        });
        tables[i] = table;
    }

    let root = ntd.root();
    let lay = &layouts[root];
    let (best, value) = tables[root]
        .entries
        .iter()
        .enumerate()
        .map(|(k, e)| (k, e.value + lay.unentered(&e.state)))
        .min_by_key(|&(k, v)| (v, k))
        .expect("every digraph has a valid coloring");

    let mut coloring = Coloring::uniform(d.m(), Color::Blue);
    let mut stack = vec![(root, best)];
    while let Some((i, k)) = stack.pop() {
        let e = &tables[i].entries[k];
        for (bit, &(_, _, a)) in layouts[i].arcs.iter().enumerate() {
            if e.state.red >> bit & 1 == 1 {
                coloring.set(a, Color::Red);
            }
        }
        let ch = &ntd.node(i).children;
        match e.back {
            Back::Leaf => {}
            Back::One(c) => stack.push((ch[0], c)),
            Back::Two(l, r) => {
                stack.push((ch[0], l));
                stack.push((ch[1], r));
            }
        }
    }
    let witness = origins(d, &coloring);
    debug_assert_eq!(witness.len(), value);
    debug_assert_eq!(super::is_valid_coloring(d, &coloring), Ok(()));
    Ok(DpOutcome {
        result: ExactResult {
            opt_size: value,
            witness,
            explored: tables.iter().map(|t| t.entries.len() as u64).sum(),
        },
        coloring,
        census,
    })
}

/// Walk type bit for (first color, last color), 0 = red, 1 = blue.
const fn ty(first: usize, last: usize) -> u8 {
    1 << (2 * first + last)
}
const RR: u8 = ty(0, 0);
const BB: u8 = ty(1, 1);

/// Types of `a` followed by `b`, dropping joins of two blue arcs.
fn compose(a: u8, b: u8) -> u8 {
    let mut out = 0;
    for f1 in 0..2 {
        for l1 in 0..2 {
            if a & ty(f1, l1) == 0 {
                continue;
            }
            for f2 in 0..2 {
                for l2 in 0..2 {
                    if b & ty(f2, l2) != 0 && !(l1 == 1 && f2 == 1) {
                        out |= ty(f1, l2);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
struct Counts {
    /// Red arcs from `Y` into the node, 0 or 1.
    red_in: u8,
    /// Red arcs from the node into `Y`, saturating at 2.
    red_out: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    /// Bit `k` set when the `k`-th bag arc is red.
    red: u64,
    counts: Vec<Counts>,
    /// `pairs[u * b + v]`: walk types from position `u` to position `v`.
    pairs: Vec<u8>,
}

impl State {
    fn empty(b: usize) -> Self {
        State {
            red: 0,
            counts: vec![Counts::default(); b],
            pairs: vec![0; b * b],
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Back {
    Leaf,
    One(usize),
    Two(usize, usize),
}

struct Entry {
    state: State,
    value: usize,
    back: Back,
}

#[derive(Default)]
struct Table {
    entries: Vec<Entry>,
    index: HashMap<State, usize>,
}

impl Table {
    fn offer(&mut self, state: State, value: usize, back: Back) {
        match self.index.get(&state) {
            Some(&k) => {
                if value < self.entries[k].value {
                    self.entries[k].value = value;
                    self.entries[k].back = back;
                }
            }
            None => {
                self.index.insert(state.clone(), self.entries.len());
                self.entries.push(Entry { state, value, back });
            }
        }
    }
}

/// Bag nodes (sorted) and the arcs among them (by arc id, as positions).
struct Layout {
    bag: Vec<Node>,
    arcs: Vec<(usize, usize, ArcId)>,
}

impl Layout {
    fn new(d: &DirectedGraph, bag: &[Node]) -> Self {
        let mut arcs = Vec::new();
        for (p, &u) in bag.iter().enumerate() {
            for &(v, a) in d.out_arcs(u) {
                if let Ok(q) = bag.binary_search(&v) {
                    arcs.push((p, q, a));
                }
            }
        }
        arcs.sort_unstable_by_key(|&(_, _, a)| a);
        Layout { bag: bag.to_vec(), arcs }
    }

    fn pos(&self, v: Node) -> usize {
        self.bag.binary_search(&v).expect("node is in the bag")
    }

    fn arc_bit(&self, a: ArcId) -> Option<usize> {
        self.arcs.binary_search_by_key(&a, |&(_, _, id)| id).ok()
    }

    /// Red in- and out-degree of every position, counting bag arcs and `Y`.
    fn degrees(&self, s: &State) -> Vec<(usize, usize)> {
        let mut deg: Vec<(usize, usize)> = s
            .counts
            .iter()
            .map(|c| (c.red_in as usize, c.red_out as usize))
            .collect();
        for (bit, &(p, q, _)) in self.arcs.iter().enumerate() {
            if s.red >> bit & 1 == 1 {
                deg[p].1 += 1;
                deg[q].0 += 1;
            }
        }
        deg
    }

    /// Bag nodes with no red in-arc at all.
    fn unentered(&self, s: &State) -> usize {
        self.degrees(s).iter().filter(|&&(i, _)| i == 0).count()
    }

    fn admissible(&self, s: &State) -> bool {
        let deg = self.degrees(s);
        if deg.iter().any(|&(i, o)| i > 1 || (i == 1 && o > 1)) {
            return false;
        }
        for (bit, &(p, q, _)) in self.arcs.iter().enumerate() {
            if s.red >> bit & 1 == 1 && p < q {
                let back = self.arcs.iter().position(|&(x, y, _)| (x, y) == (q, p));
                if back.is_some_and(|k| s.red >> k & 1 == 1) {
                    return false;
                }
            }
        }
        !self.has_cycle(s)
    }

    /// Cycle search on ports `2p` (reached by red) and `2p + 1` (by blue).
    fn has_cycle(&self, s: &State) -> bool {
        let b = self.bag.len();
        let mut incoming = vec![0u32; 2 * b];
        let both = |p: usize| 0b11u32 << (2 * p);
        let red_port = |p: usize| 1u32 << (2 * p);
        for (bit, &(p, q, _)) in self.arcs.iter().enumerate() {
            if s.red >> bit & 1 == 1 {
                incoming[2 * q] |= both(p);
            } else {
                incoming[2 * p + 1] |= red_port(q);
            }
        }
        for u in 0..b {
            for v in 0..b {
                let t = s.pairs[u * b + v];
                for first in 0..2 {
                    for last in 0..2 {
                        if t & ty(first, last) != 0 {
                            incoming[2 * v + last] |= if first == 0 { both(u) } else { red_port(u) };
                        }
                    }
                }
            }
        }
        let mut left: u32 = if b == 0 { 0 } else { u32::MAX >> (32 - 2 * b) };
        while left != 0 {
            let free = (0..2 * b).find(|&p| left >> p & 1 == 1 && incoming[p] & left == 0);
            match free {
                Some(p) => left &= !(1 << p),
                None => return true,
            }
        }
        false
    }
}

fn leaf(lay: &Layout) -> Table {
    // grow the bag one node at a time from the empty state
    let mut table = Table::default();
    table.offer(State::empty(0), 0, Back::Leaf);
    let mut prefix = Layout { bag: Vec::new(), arcs: Vec::new() };
    for &x in &lay.bag {
        let mut bag = prefix.bag.clone();
        bag.push(x);
        let arcs = lay
            .arcs
            .iter()
            .filter(|&&(p, q, _)| p < bag.len() && q < bag.len())
            .copied()
            .collect();
        // positions in `bag` equal positions in `lay.bag` restricted to the prefix
        let next = Layout { bag, arcs };
        let mut grown = insert(&table, &prefix, &next, x);
        for e in &mut grown.entries {
            e.back = Back::Leaf;
        }
        table = grown;
        prefix = next;
    }
    table
}

fn insert(child: &Table, from: &Layout, to: &Layout, x: Node) -> Table {
    let b = to.bag.len();
    let px = to.pos(x);
    let map: Vec<usize> = from.bag.iter().map(|&v| to.pos(v)).collect();
    let old_bits: Vec<Option<usize>> = to.arcs.iter().map(|&(_, _, a)| from.arc_bit(a)).collect();
    let fresh: Vec<usize> = (0..to.arcs.len()).filter(|&k| old_bits[k].is_none()).collect();
    let mut table = Table::default();
    for (k, e) in child.entries.iter().enumerate() {
        let mut base = State::empty(b);
        for (bit, old) in old_bits.iter().enumerate() {
            if old.is_some_and(|o| e.state.red >> o & 1 == 1) {
                base.red |= 1 << bit;
            }
        }
        let fb = from.bag.len();
        for (i, &pi) in map.iter().enumerate() {
            base.counts[pi] = e.state.counts[i];
            for (j, &pj) in map.iter().enumerate() {
                base.pairs[pi * b + pj] = e.state.pairs[i * fb + j];
            }
        }
        debug_assert_eq!(base.counts[px], Counts::default());
        for mask in 0..1u64 << fresh.len() {
            let mut s = base.clone();
            for (j, &bit) in fresh.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    s.red |= 1 << bit;
                }
            }
            if to.admissible(&s) {
                table.offer(s, e.value, Back::One(k));
            }
        }
    }
    table
}

fn forget(child: &Table, from: &Layout, to: &Layout, x: Node) -> Table {
    let fb = from.bag.len();
    let b = to.bag.len();
    let px = from.pos(x);
    let keep: Vec<usize> = (0..fb).filter(|&p| p != px).collect();
    let bits: Vec<usize> = to.arcs.iter().map(|&(_, _, a)| from.arc_bit(a).expect("bag arcs persist")).collect();
    let mut table = Table::default();
    for (k, e) in child.entries.iter().enumerate() {
        let s = &e.state;
        let red = |bit: usize| s.red >> bit & 1 == 1;
        let mut counts = s.counts.clone();
        // segments to and from x: walks through Y or the arc itself
        let mut to_x = vec![0u8; fb];
        let mut from_x = vec![0u8; fb];
        for p in 0..fb {
            to_x[p] = s.pairs[p * fb + px];
            from_x[p] = s.pairs[px * fb + p];
        }
        let mut x_entered = s.counts[px].red_in > 0;
        for (bit, &(p, q, _)) in from.arcs.iter().enumerate() {
            if q == px {
                if red(bit) {
                    counts[p].red_out = (counts[p].red_out + 1).min(2);
                    to_x[p] |= RR;
                    x_entered = true;
                } else {
                    from_x[p] |= BB;
                }
            } else if p == px {
                if red(bit) {
                    counts[q].red_in += 1;
                    from_x[q] |= RR;
                } else {
                    to_x[q] |= BB;
                }
            }
        }
        let mut next = State::empty(b);
        for (bit, &old) in bits.iter().enumerate() {
            if red(old) {
                next.red |= 1 << bit;
            }
        }
        for (i, &u) in keep.iter().enumerate() {
            next.counts[i] = counts[u];
            for (j, &v) in keep.iter().enumerate() {
                if u != v {
                    next.pairs[i * b + j] = s.pairs[u * fb + v] | compose(to_x[u], from_x[v]);
                }
            }
        }
        debug_assert!(to.admissible(&next));
        table.offer(next, e.value + usize::from(!x_entered), Back::One(k));
    }
    table
}

fn join(left: &Table, right: &Table, lay: &Layout) -> Table {
    let mut by_red: HashMap<u64, Vec<usize>> = HashMap::new();
    for (k, e) in right.entries.iter().enumerate() {
        by_red.entry(e.state.red).or_default().push(k);
    }
    let mut table = Table::default();
    for (i, l) in left.entries.iter().enumerate() {
        let Some(partners) = by_red.get(&l.state.red) else {
            continue;
        };
        for &j in partners {
            let r = &right.entries[j];
            let counts: Vec<Counts> = l
                .state
                .counts
                .iter()
                .zip(&r.state.counts)
                .map(|(a, c)| Counts {
                    red_in: a.red_in + c.red_in,
                    red_out: (a.red_out + c.red_out).min(2),
                })
                .collect();
            if counts.iter().any(|c| c.red_in > 1) {
                continue;
            }
            let pairs = l.state.pairs.iter().zip(&r.state.pairs).map(|(a, c)| a | c).collect();
            let s = State {
                red: l.state.red,
                counts,
                pairs,
            };
            if lay.admissible(&s) {
                table.offer(s, l.value + r.value, Back::Two(i, j));
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::elimination_decomposition;

    fn solve(d: &DirectedGraph) -> DpOutcome {
        let td = elimination_decomposition(&d.underlying_undirected(), None);
        let ntd = td.to_nice(0).unwrap();
        dp_solve_detailed(d, &ntd, DpConfig::default()).unwrap()
    }

    #[test]
    fn compose_blocks_blue_blue() {
        assert_eq!(compose(RR, RR), RR);
        assert_eq!(compose(BB, BB), 0);
        assert_eq!(compose(ty(0, 1), RR), ty(0, 0));
    }

    #[test]
    fn single_arc_and_path() {
        let d = DirectedGraph::from_arcs(2, [(0, 1)]).unwrap();
        let o = solve(&d);
        assert_eq!(o.result.opt_size, 1);
        assert_eq!(o.result.witness.to_vec(), vec![0]);
        let path = DirectedGraph::from_arcs(5, (0..4).map(|i| (i, i + 1))).unwrap();
        assert_eq!(solve(&path).result.opt_size, 1);
    }

    #[test]
    fn red_cycle_is_excluded() {
        // a directed 3-cycle still needs one origin
        let d = DirectedGraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(solve(&d).result.opt_size, 1);
    }

    #[test]
    fn isolated_and_sources() {
        let d = DirectedGraph::from_arcs(4, [(0, 2), (1, 2)]).unwrap();
        // 0, 1 and the isolated 3 have no in-arcs
        assert_eq!(solve(&d).result.opt_size, 3);
    }
}
