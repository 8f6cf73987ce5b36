//! Strong and weak regions.
//!
//! A region `R` is S-strong when `S` together with everything around `R`
//! still fails to dominate all of `R`. Every feasible extension of `S` must
//! then pick a node inside `R`, which is what makes disjoint strong regions a
//! lower bound.

use thiserror::Error;

use crate::graph::{Node, NodeSet, UndirectedGraph};
use crate::propagation::{closure, is_feasible};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("region is not strong for the given set")]
    NotStrong,
    #[error("exhaustive check limited to {limit} nodes, graph has {n}")]
    TooLarge { n: usize, limit: usize },
}

/// Largest graph accepted by [`every_solution_hits`].
pub const HITTING_LIMIT: usize = 16;

/// `R ⊄ closure(S ∪ nbr(R))`.
pub fn is_strong(g: &UndirectedGraph, s: &NodeSet, r: &NodeSet) -> bool {
    let mut seeds = g.neighborhood(r);
    seeds.union_with(s);
    !r.is_subset(&closure(g, &seeds))
}

/// Removes nodes of a strong region, smallest id first, restarting the scan
/// after each removal, until no single removal keeps it strong.
pub fn shrink_to_minimal(
    g: &UndirectedGraph,
    s: &NodeSet,
    r: &NodeSet,
) -> Result<NodeSet, RegionError> {
    if !is_strong(g, s, r) {
        return Err(RegionError::NotStrong);
    }
    let mut cur = r.clone();
    'scan: loop {
        for v in cur.to_vec() {
            cur.remove(v);
            if is_strong(g, s, &cur) {
                continue 'scan;
            }
            cur.insert(v);
        }
        return Ok(cur);
    }
}

/// Whether every feasible `S ∪ S*` has a node of `S* \ S` inside `R`.
///
/// Decided by enumerating the extensions that avoid `R`, smallest first,
/// and stopping at the first feasible one.
pub fn every_solution_hits(
    g: &UndirectedGraph,
    s: &NodeSet,
    r: &NodeSet,
) -> Result<bool, RegionError> {
    let n = g.n();
    if n > HITTING_LIMIT {
        return Err(RegionError::TooLarge {
            n,
            limit: HITTING_LIMIT,
        });
    }
    let free: Vec<Node> = (0..n).filter(|&v| !s.contains(v) && !r.contains(v)).collect();
    let mut masks: Vec<u32> = (0..1u32 << free.len()).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let mut cand = s.clone();
        for (i, &v) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                cand.insert(v);
            }
        }
        if is_feasible(g, &cand) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn grid3() -> UndirectedGraph {
        let mut e = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = r * 3 + c;
                if c < 2 {
                    e.push((v, v + 1));
                }
                if r < 2 {
                    e.push((v, v + 3));
                }
            }
        }
        UndirectedGraph::from_edges(9, e).unwrap()
    }

    #[test]
    fn whole_graph_is_strong() {
        let g = path(3);
        assert!(is_strong(&g, &NodeSet::new(3), &NodeSet::full(3)));
        assert!(every_solution_hits(&g, &NodeSet::new(3), &NodeSet::full(3)).unwrap());
    }

    #[test]
    fn middle_of_path_is_weak() {
        let g = path(3);
        assert!(!is_strong(&g, &NodeSet::new(3), &NodeSet::from_nodes(3, [1])));
    }

    #[test]
    fn grid_corner_is_weak() {
        let g = grid3();
        assert!(!is_strong(&g, &NodeSet::new(9), &NodeSet::from_nodes(9, [0])));
    }

    #[test]
    fn empty_region_is_never_hit() {
        let g = path(3);
        assert!(!is_strong(&g, &NodeSet::new(3), &NodeSet::new(3)));
        assert!(!every_solution_hits(&g, &NodeSet::new(3), &NodeSet::new(3)).unwrap());
    }

    #[test]
    fn shrink_is_minimal_and_rejects_weak() {
        let g = grid3();
        let none = NodeSet::new(9);
        let r = shrink_to_minimal(&g, &none, &NodeSet::full(9)).unwrap();
        assert!(is_strong(&g, &none, &r));
        for v in r.iter() {
            let mut smaller = r.clone();
            smaller.remove(v);
            assert!(!is_strong(&g, &none, &smaller));
        }
        assert_eq!(shrink_to_minimal(&g, &none, &r).unwrap(), r);
        assert_eq!(
            shrink_to_minimal(&g, &none, &NodeSet::from_nodes(9, [0])),
            Err(RegionError::NotStrong)
        );
    }

    #[test]
    fn size_limit() {
        let g = path(17);
        assert!(matches!(
            every_solution_hits(&g, &NodeSet::new(17), &NodeSet::full(17)),
            Err(RegionError::TooLarge { n: 17, .. })
        ));
    }
}
