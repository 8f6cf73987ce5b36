//! Exhaustive optimum by subset enumeration: sizes ascending, lexicographic
//! within a size, first feasible set wins.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{DirectedGraph, Node, NodeSet, UndirectedGraph};
use crate::propagation::{Adjacency, Propagator};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactConfig {
    /// Largest solution size to try; `None` means `n`.
    pub size_cap: Option<usize>,
    /// Maximum number of candidate sets to examine.
    pub budget: u64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            size_cap: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl ExactConfig {
    pub fn with_budget(budget: u64) -> Self {
        ExactConfig {
            budget,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactResult {
    pub opt_size: usize,
    pub witness: NodeSet,
    pub explored: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// Every set smaller than `lower_bound` was ruled out before the budget ran out.
    #[error("budget exceeded after {explored} candidates; optimum is at least {lower_bound}")]
    BudgetExceeded { lower_bound: usize, explored: u64 },
    #[error("no feasible set of size at most {cap}")]
    SizeCap { cap: usize },
}

impl ExactError {
    pub fn lower_bound(&self) -> usize {
        match *self {
            ExactError::BudgetExceeded { lower_bound, .. } => lower_bound,
            ExactError::SizeCap { cap } => cap + 1,
        }
    }
}

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Enumerates `mandatory ∪ T` for subsets `T` of the remaining nodes.
fn search(
    n: usize,
    mandatory: &NodeSet,
    cfg: ExactConfig,
    mut feasible: impl FnMut(&NodeSet) -> bool,
) -> Result<ExactResult, ExactError> {
    let free: Vec<Node> = (0..n).filter(|&v| !mandatory.contains(v)).collect();
    let base = mandatory.len();
    let cap = cfg.size_cap.unwrap_or(n).min(n);
    let mut explored: u64 = 0;
    for size in base..=cap {
        let k = size - base;
        let count = binomial(free.len(), k);
        if explored.saturating_add(count) > cfg.budget {
            return Err(ExactError::BudgetExceeded {
                lower_bound: size,
                explored,
            });
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            explored += 1;
            let mut cand = mandatory.clone();
            for &i in &idx {
                cand.insert(free[i]);
            }
            if feasible(&cand) {
                return Ok(ExactResult {
                    opt_size: size,
                    witness: cand,
                    explored,
                });
            }
            // next combination in lexicographic order
            let m = free.len();
            let Some(pos) = (0..k).rev().find(|&p| idx[p] < m - k + p) else {
                break;
            };
            idx[pos] += 1;
            for p in pos + 1..k {
                idx[p] = idx[p - 1] + 1;
            }
        }
    }
    Err(ExactError::SizeCap { cap })
}

fn propagation_check<G: Adjacency>(g: &G) -> impl FnMut(&NodeSet) -> bool + '_ {
    let blank = Propagator::new(g);
    move |cand| {
        let mut p = blank.clone();
        for v in cand.iter() {
            p.seed(v);
        }
        p.propagate();
        p.is_complete()
    }
}

/// Minimum power dominating set.
pub fn exact_pds(g: &UndirectedGraph, cfg: ExactConfig) -> Result<ExactResult, ExactError> {
    search(g.n(), &NodeSet::new(g.n()), cfg, propagation_check(g))
}

/// Minimum directed power dominating set. Nodes without in-arcs are in every
/// feasible set and are fixed up front.
pub fn exact_directed_pds(d: &DirectedGraph, cfg: ExactConfig) -> Result<ExactResult, ExactError> {
    let sources = NodeSet::from_nodes(d.n(), (0..d.n()).filter(|&v| d.in_degree(v) == 0));
    search(d.n(), &sources, cfg, propagation_check(d))
}

/// Minimum dominating set (Rule 1 only).
pub fn exact_dominating_set(g: &UndirectedGraph, cfg: ExactConfig) -> Result<ExactResult, ExactError> {
    search(g.n(), &NodeSet::new(g.n()), cfg, |cand| {
        g.closed_neighborhood(cand).is_full()
    })
}
