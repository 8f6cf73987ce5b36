//! Benchmark suites. Every row is re-verified with the closure engine.
//!
//! CSV columns, in order: `suite, instance, n, m, method, seed, size,
//! lower_bound, reference, reference_kind, ratio, feasible, verified,
//! wall_ms`. `reference_kind` is `opt` (exact optimum), `upper` (a verified
//! fixture solution) or `minrep+1` (MinRep optimum plus one). `ratio` is
//! `size / reference`. `feasible` is the solver's claim, `verified` the
//! recomputation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pds_core::approx::twd_approx;
use pds_core::exact::{exact_directed_pds, exact_pds, ExactConfig};
use pds_core::generators::{
    gen_greedy_bad, gen_grid, reduce_minrep_to_directed_pds, reduce_minrep_to_pds, MinRepInstance,
};
use pds_core::graph::io::AnyGraph;
use pds_core::graph::NodeSet;
use pds_core::heuristics::{cleanup, greedy_run, partition_approx, proximity_run, TieBreak};

use crate::args::Suite;
use crate::commands::{ratio, recompute};
use crate::report::one_based;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct BenchConfig {
    pub threads: Option<usize>,
    pub greedy_gap: GreedyGapConfig,
    pub grid: GridConfig,
    pub reduction: ReductionConfig,
}

/// `gen_greedy_bad(l, m)` for each listed `m`, adversarial ties.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GreedyGapConfig {
    pub l: usize,
    pub m: Vec<usize>,
}

impl Default for GreedyGapConfig {
    fn default() -> Self {
        GreedyGapConfig { l: 1, m: vec![2, 3, 4] }
    }
}

/// Every grid `rows × cols` with `min_side <= rows <= cols <= max_side`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct GridConfig {
    pub min_side: usize,
    pub max_side: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { min_side: 2, max_side: 5 }
    }
}

/// Random MinRep instances; instance `i` uses shape `shapes[i % len]`
/// (`[qa, qb, part_size]`) and seed `--seed + i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReductionConfig {
    pub instances: usize,
    pub lambda: usize,
    pub p: f64,
    pub shapes: Vec<[usize; 3]>,
    pub budget: u64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            instances: 20,
            lambda: pds_core::generators::DEFAULT_LAMBDA,
            p: 0.6,
            shapes: vec![[1, 1, 2], [1, 2, 1], [2, 1, 2], [2, 2, 1], [1, 1, 3]],
            budget: 100_000_000,
        }
    }
}

impl BenchConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("in {}", path.display()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub suite: String,
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub method: String,
    pub seed: u64,
    pub size: usize,
    pub lower_bound: Option<usize>,
    pub reference: usize,
    pub reference_kind: String,
    pub ratio: f64,
    pub feasible: bool,
    pub verified: bool,
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    #[serde(flatten)]
    pub row: BenchRow,
    /// 1-based.
    pub solution: Vec<usize>,
}

/// Rows sorted by suite, instance and method, plus the instances by id.
#[derive(Clone, Debug)]
pub struct BenchResults {
    pub records: Vec<BenchRecord>,
    pub graphs: BTreeMap<String, AnyGraph>,
}

struct Instance {
    suite: &'static str,
    id: String,
    graph: AnyGraph,
    reference: usize,
    reference_kind: &'static str,
    methods: Vec<Solver>,
}

type Solver = (&'static str, Box<dyn Fn(&AnyGraph) -> anyhow::Result<(NodeSet, Option<usize>)> + Send + Sync>);

fn undirected(g: &AnyGraph) -> &pds_core::UndirectedGraph {
    match g {
        AnyGraph::Undirected(g) => g,
        AnyGraph::Directed(_) => unreachable!("suite builds undirected instances here"),
    }
}

fn greedy_gap(cfg: &GreedyGapConfig) -> Vec<Instance> {
    let l = cfg.l.max(1);
    cfg.m
        .iter()
        .map(|&m| {
            let g = gen_greedy_bad(l, m);
            let tb = TieBreak::AdversarialCenterFirst;
            let methods: Vec<Solver> = vec![
                (
                    "column",
                    Box::new(move |g| {
                        let g = undirected(g);
                        let cols = 9 * m;
                        Ok((NodeSet::from_nodes(g.n(), (0..9 * l).map(|r| r * cols)), None))
                    }),
                ),
                ("greedy", Box::new(move |g| Ok((greedy_run(undirected(g), tb).solution(g.n()), None)))),
                ("proximity", Box::new(move |g| Ok((proximity_run(undirected(g), tb).solution(g.n()), None)))),
                (
                    "cleanup",
                    Box::new(move |g| {
                        let g = undirected(g);
                        let run = greedy_run(g, tb);
                        Ok((cleanup(g, &run.solution(g.n()), &run.picks)?, None))
                    }),
                ),
            ];
            Instance {
                suite: "greedy-gap",
                id: format!("greedy-bad-l{l}-m{m}"),
                graph: AnyGraph::Undirected(g),
                reference: 9 * l,
                reference_kind: "upper",
                methods,
            }
        })
        .collect()
}

fn grid(cfg: &GridConfig) -> anyhow::Result<Vec<Instance>> {
    let mut out = Vec::new();
    for rows in cfg.min_side.max(1)..=cfg.max_side {
        for cols in rows..=cfg.max_side {
            let (g, td) = gen_grid(rows, cols);
            let opt = exact_pds(&g, ExactConfig::default())?.opt_size;
            let methods: Vec<Solver> = vec![
                (
                    "exact",
                    Box::new(|g| {
                        let r = exact_pds(undirected(g), ExactConfig::default())?;
                        Ok((r.witness, Some(r.opt_size)))
                    }),
                ),
                (
                    "twd-approx",
                    Box::new(move |g| {
                        let r = twd_approx(undirected(g), &td)?;
                        Ok((r.solution, Some(r.lower_bound)))
                    }),
                ),
                (
                    "greedy",
                    Box::new(|g| Ok((greedy_run(undirected(g), TieBreak::Lexicographic).solution(g.n()), None))),
                ),
                (
                    "proximity",
                    Box::new(|g| Ok((proximity_run(undirected(g), TieBreak::Lexicographic).solution(g.n()), None))),
                ),
                ("partition", Box::new(|g| Ok((partition_approx(undirected(g))?.solution, None)))),
            ];
            out.push(Instance {
                suite: "grid",
                id: format!("grid-{rows}x{cols}"),
                graph: AnyGraph::Undirected(g),
                reference: opt,
                reference_kind: "opt",
                methods,
            });
        }
    }
    Ok(out)
}

fn reduction(cfg: &ReductionConfig, seed: u64) -> anyhow::Result<Vec<Instance>> {
    if cfg.shapes.is_empty() && cfg.instances > 0 {
        return Err(anyhow!("reduction suite needs at least one shape"));
    }
    let budget = ExactConfig::with_budget(cfg.budget);
    let mut out = Vec::new();
    for i in 0..cfg.instances {
        let [qa, qb, size] = cfg.shapes[i % cfg.shapes.len()];
        let inst = MinRepInstance::random(qa, qb, size, cfg.p, seed.wrapping_add(i as u64))?;
        let opt = inst.solve_exact()?.len();
        let pds = reduce_minrep_to_pds(&inst, cfg.lambda)?;
        let dpds = reduce_minrep_to_directed_pds(&inst, cfg.lambda)?;
        out.push(Instance {
            suite: "reduction",
            id: format!("minrep-{i:03}-pds"),
            graph: AnyGraph::Undirected(pds.graph),
            reference: opt + 1,
            reference_kind: "minrep+1",
            methods: vec![(
                "exact",
                Box::new(move |g| {
                    let r = exact_pds(undirected(g), budget)?;
                    Ok((r.witness, Some(r.opt_size)))
                }),
            )],
        });
        out.push(Instance {
            suite: "reduction",
            id: format!("minrep-{i:03}-dpds"),
            graph: AnyGraph::Directed(dpds.graph),
            reference: opt + 1,
            reference_kind: "minrep+1",
            methods: vec![(
                "directed-exact",
                Box::new(move |g| match g {
                    AnyGraph::Directed(d) => {
                        let r = exact_directed_pds(d, budget)?;
                        Ok((r.witness, Some(r.opt_size)))
                    }
                    AnyGraph::Undirected(_) => unreachable!("directed instance"),
                }),
            )],
        });
    }
    Ok(out)
}

fn edges(g: &AnyGraph) -> usize {
    match g {
        AnyGraph::Undirected(g) => g.m(),
        AnyGraph::Directed(d) => d.m(),
    }
}

fn suite_rank(s: &str) -> usize {
    ["greedy-gap", "grid", "reduction"].iter().position(|&x| x == s).unwrap_or(usize::MAX)
}

/// Builds the instances of `suite` and solves them on `threads` workers
/// (rayon's default when `None`).
pub fn run(suite: Suite, cfg: &BenchConfig, seed: u64, threads: Option<usize>, timed: bool) -> anyhow::Result<BenchResults> {
    let pick = |s: Suite| suite == Suite::All || suite == s;
    let mut instances = Vec::new();
    if pick(Suite::GreedyGap) {
        instances.extend(greedy_gap(&cfg.greedy_gap));
    }
    if pick(Suite::Grid) {
        instances.extend(grid(&cfg.grid)?);
    }
    if pick(Suite::Reduction) {
        instances.extend(reduction(&cfg.reduction, seed)?);
    }
    let jobs: Vec<(usize, usize)> = instances
        .iter()
        .enumerate()
        .flat_map(|(i, inst)| (0..inst.methods.len()).map(move |j| (i, j)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads.or(cfg.threads) {
        builder = builder.num_threads(t);
    }
    let pool = builder.build()?;
    let mut records = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, j)| {
                let inst = &instances[i];
                let (method, solver) = &inst.methods[j];
                let start = Instant::now();
                let (solution, lower_bound) =
                    solver(&inst.graph).with_context(|| format!("{} on {}", method, inst.id))?;
                let wall = start.elapsed().as_secs_f64() * 1e3;
                let size = solution.len();
                Ok(BenchRecord {
                    row: BenchRow {
                        suite: inst.suite.to_string(),
                        instance: inst.id.clone(),
                        n: inst.graph.n(),
                        m: edges(&inst.graph),
                        method: method.to_string(),
                        seed,
                        size,
                        lower_bound,
                        reference: inst.reference,
                        reference_kind: inst.reference_kind.to_string(),
                        ratio: ratio(size, inst.reference),
                        feasible: true,
                        verified: recompute(&inst.graph, &solution),
                        wall_ms: timed.then_some(wall),
                    },
                    solution: one_based(&solution),
                })
            })
            .collect::<anyhow::Result<Vec<BenchRecord>>>()
    })?;
    let method_rank = |r: &BenchRecord| {
        instances
            .iter()
            .find(|i| i.id == r.row.instance)
            .and_then(|i| i.methods.iter().position(|(m, _)| *m == r.row.method))
            .unwrap_or(usize::MAX)
    };
    records.sort_by_cached_key(|r| (suite_rank(&r.row.suite), r.row.instance.clone(), method_rank(r)));
    let graphs = instances.into_iter().map(|i| (i.id, i.graph)).collect();
    Ok(BenchResults { records, graphs })
}

impl BenchResults {
    pub fn csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(&r.row)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
    }

    pub fn json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(&self.records)? + "\n")
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<20} {:<15} {:>6} {:>5} {:>5} {:>9} {:>7} {:>5}",
            "instance", "method", "n", "size", "lb", "reference", "ratio", "ok"
        );
        for r in &self.records {
            let r = &r.row;
            let lb = r.lower_bound.map_or("-".to_string(), |x| x.to_string());
            let _ = writeln!(
                s,
                "{:<20} {:<15} {:>6} {:>5} {:>5} {:>9} {:>7.3} {:>5}",
                r.instance,
                r.method,
                r.n,
                r.size,
                lb,
                format!("{} {}", r.reference, short_kind(&r.reference_kind)),
                r.ratio,
                if r.verified { "yes" } else { "NO" }
            );
        }
        s
    }
}

fn short_kind(kind: &str) -> &str {
    match kind {
        "upper" => "ub",
        "minrep+1" => "mr",
        other => other,
    }
}
