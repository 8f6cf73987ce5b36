use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pds_core::approx::{tree_pass, twd_approx};
use pds_core::directed::{dp_solve_detailed, DpConfig, DpError};
use pds_core::exact::{exact_directed_pds, exact_pds, ExactConfig, ExactError};
use pds_core::generators::{
    gen_augmented, gen_greedy_bad, gen_grid, gen_proximity_bad, gen_triangle_chain, partial_k_tree,
    random_orientation, reduce_minrep_to_directed_pds, reduce_minrep_to_pds, MinRepInstance,
};
use pds_core::graph::io::{parse_graph, parse_set, parse_td, write_graph, write_set, write_td, AnyGraph};
use pds_core::graph::{elimination_decomposition, DirectedGraph, NodeSet, TreeDecomposition, UndirectedGraph};
use pds_core::heuristics::{cleanup, greedy_run, partition_approx, proximity_run};
use pds_core::propagation::{closure, closure_trace};

use crate::args::{Cli, Format, GenCommand, Method, Output, SolveArgs, TraceArgs, VerifyArgs};
use crate::report::{one_based, SolveConfig, SolveReport, TraceOut, VerifyReport};
use crate::{Failure, Status};

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_graph(path: &Path) -> anyhow::Result<AnyGraph> {
    parse_graph(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_td(path: &Path) -> anyhow::Result<TreeDecomposition> {
    parse_td(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_set(path: &Path, n: usize) -> anyhow::Result<NodeSet> {
    parse_set(&read(path)?, n).with_context(|| format!("in {}", path.display()))
}

fn undirected(g: AnyGraph, method: Method) -> anyhow::Result<UndirectedGraph> {
    match g {
        AnyGraph::Undirected(g) => Ok(g),
        AnyGraph::Directed(_) => bail!("method {} needs an undirected graph", method.name()),
    }
}

fn directed(g: AnyGraph, method: Method) -> anyhow::Result<DirectedGraph> {
    match g {
        AnyGraph::Directed(d) => Ok(d),
        AnyGraph::Undirected(_) => bail!("method {} needs a directed graph", method.name()),
    }
}

fn emit(cli: &Cli, out: &mut dyn Write, json: &impl serde::Serialize, text: String) -> anyhow::Result<()> {
    match cli.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(json)?)?,
        Format::Text => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn exact_failure(e: ExactError) -> Failure {
    Failure::Budget(anyhow!(e))
}

fn dp_failure(e: DpError) -> Failure {
    match e {
        DpError::Decomposition(_) => Failure::Usage(anyhow!(e)),
        _ => Failure::Budget(anyhow!(e)),
    }
}

/// What a solver produced before verification.
struct Solved {
    solution: NodeSet,
    lower_bound: Option<usize>,
    width: Option<usize>,
    explored: Option<u64>,
}

impl Solved {
    fn plain(solution: NodeSet) -> Self {
        Solved {
            solution,
            lower_bound: None,
            width: None,
            explored: None,
        }
    }
}

fn root_of(args: &SolveArgs, td: &TreeDecomposition) -> anyhow::Result<usize> {
    match args.root {
        None => Ok(td.root()),
        Some(0) => bail!("t-node ids are 1-based"),
        Some(r) if r > td.len() => bail!("root {r} outside 1..={}", td.len()),
        Some(r) => Ok(r - 1),
    }
}

fn required_td(args: &SolveArgs) -> anyhow::Result<TreeDecomposition> {
    let path = args
        .td
        .as_ref()
        .ok_or_else(|| anyhow!("method {} needs --td", args.method.name()))?;
    load_td(path)
}

pub fn solve(cli: &Cli, args: &SolveArgs, out: &mut dyn Write) -> Result<Status, Failure> {
    let graph = load_graph(&args.graph)?;
    let n = graph.n();
    let exact_cfg = ExactConfig {
        size_cap: args.size_cap,
        budget: args.budget,
    };
    let tiebreak = args.tiebreak.with_seed(cli.seed);
    let mut config = SolveConfig {
        tiebreak: None,
        budget: None,
        size_cap: None,
        root: None,
        max_width: None,
        max_states: None,
    };
    let start = Instant::now();
    let solved = match args.method {
        Method::Exact | Method::DirectedExact => {
            config.budget = Some(args.budget);
            config.size_cap = args.size_cap;
            let r = if args.method == Method::Exact {
                exact_pds(&undirected(graph.clone(), args.method)?, exact_cfg)
            } else {
                exact_directed_pds(&directed(graph.clone(), args.method)?, exact_cfg)
            }
            .map_err(exact_failure)?;
            Solved {
                lower_bound: Some(r.opt_size),
                explored: Some(r.explored),
                ..Solved::plain(r.witness)
            }
        }
        Method::TwdApprox => {
            let g = undirected(graph.clone(), args.method)?;
            let td = required_td(args)?;
            let root = root_of(args, &td)?;
            config.root = Some(root + 1);
            let r = twd_approx(&g, &td.with_root(root)).map_err(|e| Failure::Usage(anyhow!(e)))?;
            Solved {
                lower_bound: Some(r.lower_bound),
                width: Some(r.width),
                ..Solved::plain(r.solution)
            }
        }
        Method::TreeExact => {
            let g = undirected(graph.clone(), args.method)?;
            if !g.is_tree() {
                return Err(Failure::Usage(anyhow!("tree-exact needs a tree")));
            }
            let r = tree_pass(&g);
            Solved {
                lower_bound: Some(r.lower_bound),
                width: Some(r.width),
                ..Solved::plain(r.solution)
            }
        }
        Method::Greedy | Method::Proximity => {
            let g = undirected(graph.clone(), args.method)?;
            config.tiebreak = Some(tiebreak_name(args));
            let run = if args.method == Method::Greedy {
                greedy_run(&g, tiebreak)
            } else {
                proximity_run(&g, tiebreak)
            };
            Solved::plain(run.solution(n))
        }
        Method::Cleanup => {
            let g = undirected(graph.clone(), args.method)?;
            let (start_set, order) = match &args.set {
                Some(path) => {
                    let s = load_set(path, n)?;
                    let order = s.to_vec();
                    (s, order)
                }
                None => {
                    config.tiebreak = Some(tiebreak_name(args));
                    let run = greedy_run(&g, tiebreak);
                    (run.solution(n), run.picks)
                }
            };
            match cleanup(&g, &start_set, &order) {
                Ok(s) => Solved::plain(s),
                Err(e) => return Err(Failure::Usage(anyhow!(e).context("cleanup input"))),
            }
        }
        Method::Partition => {
            let g = undirected(graph.clone(), args.method)?;
            let r = partition_approx(&g).map_err(|e| Failure::Usage(anyhow!(e)))?;
            Solved {
                explored: Some(r.candidates_examined as u64),
                ..Solved::plain(r.solution)
            }
        }
        Method::DirectedDp => {
            let d = directed(graph.clone(), args.method)?;
            let td = required_td(args)?;
            let root = root_of(args, &td)?;
            config.root = Some(root + 1);
            config.max_width = Some(args.max_width);
            config.max_states = Some(args.max_states);
            let nice = td.to_nice(root).map_err(|e| Failure::Usage(anyhow!(e)))?;
            let cfg = DpConfig {
                max_width: args.max_width,
                max_states: args.max_states,
            };
            let r = dp_solve_detailed(&d, &nice, cfg).map_err(dp_failure)?;
            if let Some(path) = &args.dump_states {
                let census: Vec<_> = r
                    .census
                    .iter()
                    .map(|c| {
                        let mut c = c.clone();
                        c.tnode += 1;
                        c
                    })
                    .collect();
                fs::write(path, serde_json::to_string_pretty(&census).map_err(anyhow::Error::from)? + "\n")
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            Solved {
                lower_bound: Some(r.result.opt_size),
                width: Some(nice.width()),
                ..Solved::plain(r.result.witness)
            }
        }
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let feasible = recompute(&graph, &solved.solution);
    let size = solved.solution.len();
    let report = SolveReport {
        method: args.method.name().to_string(),
        graph: args.graph.display().to_string(),
        n,
        solution: one_based(&solved.solution),
        size,
        feasible,
        lower_bound: solved.lower_bound,
        ratio_vs_lb: solved.lower_bound.map(|lb| ratio(size, lb)),
        width: solved.width,
        explored: solved.explored,
        wall_time_ms: (!cli.no_time).then_some(elapsed),
        seed: cli.seed,
        config,
    };
    emit(cli, out, &report, report.text())?;
    Ok(if feasible { Status::Ok } else { Status::Infeasible })
}

fn tiebreak_name(args: &SolveArgs) -> String {
    format!("{:?}", args.tiebreak).to_lowercase()
}

/// `size / lb`, with `0 / 0 = 1`.
pub fn ratio(size: usize, lb: usize) -> f64 {
    if lb == 0 {
        if size == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        size as f64 / lb as f64
    }
}

/// Feasibility by the closure engine.
pub fn recompute(g: &AnyGraph, s: &NodeSet) -> bool {
    match g {
        AnyGraph::Undirected(g) => closure(g, s).is_full(),
        AnyGraph::Directed(d) => closure(d, s).is_full(),
    }
}

pub fn verify_set(g: &AnyGraph, name: &str, s: &NodeSet, with_trace: bool) -> VerifyReport {
    let (cl, trace) = match g {
        AnyGraph::Undirected(g) => {
            if with_trace {
                let t = closure_trace(g, s);
                (t.closure().clone(), Some(TraceOut::from(&t)))
            } else {
                (closure(g, s), None)
            }
        }
        AnyGraph::Directed(d) => {
            if with_trace {
                let t = closure_trace(d, s);
                (t.closure().clone(), Some(TraceOut::from(&t)))
            } else {
                (closure(d, s), None)
            }
        }
    };
    let n = g.n();
    VerifyReport {
        graph: name.to_string(),
        n,
        set: one_based(s),
        feasible: cl.is_full(),
        closure_size: cl.len(),
        missing: (0..n).filter(|&v| !cl.contains(v)).map(|v| v + 1).collect(),
        trace,
    }
}

pub fn verify(cli: &Cli, args: &VerifyArgs, out: &mut dyn Write) -> Result<Status, Failure> {
    let g = load_graph(&args.graph)?;
    if args.directed && !matches!(g, AnyGraph::Directed(_)) {
        return Err(Failure::Usage(anyhow!("{} is not a directed graph", args.graph.display())));
    }
    let s = load_set(&args.set, g.n())?;
    let report = verify_set(&g, &args.graph.display().to_string(), &s, args.trace);
    emit(cli, out, &report, report.text())?;
    Ok(if report.feasible { Status::Ok } else { Status::Infeasible })
}

pub fn trace(cli: &Cli, args: &TraceArgs, out: &mut dyn Write) -> Result<Status, Failure> {
    let g = load_graph(&args.graph)?;
    let s = load_set(&args.set, g.n())?;
    let report = verify_set(&g, &args.graph.display().to_string(), &s, true);
    let t = report.trace.expect("trace requested");
    emit(cli, out, &t, t.text())?;
    Ok(Status::Ok)
}

fn write_to(path: Option<&Path>, text: &str, out: &mut dyn Write) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn emit_instance(
    g: &AnyGraph,
    td: impl FnOnce() -> TreeDecomposition,
    output: &Output,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    write_to(output.out.as_deref(), &write_graph(g), out)?;
    if let Some(path) = &output.td {
        write_to(Some(path), &write_td(&td()), out)?;
    }
    Ok(())
}

fn load_undirected(path: &Path) -> anyhow::Result<UndirectedGraph> {
    match load_graph(path)? {
        AnyGraph::Undirected(g) => Ok(g),
        AnyGraph::Directed(_) => bail!("{} is directed, expected an undirected graph", path.display()),
    }
}

fn load_minrep(path: &Path) -> anyhow::Result<MinRepInstance> {
    MinRepInstance::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn elimination(g: &UndirectedGraph) -> impl FnOnce() -> TreeDecomposition + '_ {
    move || elimination_decomposition(g, None)
}

pub fn gen(cli: &Cli, cmd: &GenCommand, out: &mut dyn Write) -> Result<Status, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match cmd {
        GenCommand::Grid { rows, cols, output } => {
            if *rows == 0 || *cols == 0 {
                return Err(Failure::Usage(anyhow!("grid sides must be positive")));
            }
            let (g, td) = gen_grid(*rows, *cols);
            emit_instance(&AnyGraph::Undirected(g), || td, output, out)?;
        }
        GenCommand::TriangleChain { t, output } => {
            if *t == 0 {
                return Err(Failure::Usage(anyhow!("--t must be positive")));
            }
            let g = gen_triangle_chain(*t);
            emit_instance(&AnyGraph::Undirected(g.clone()), elimination(&g), output, out)?;
        }
        GenCommand::Augment { input, output } => {
            let g = gen_augmented(&load_undirected(input)?);
            emit_instance(&AnyGraph::Undirected(g.clone()), elimination(&g), output, out)?;
        }
        GenCommand::GreedyBad { l, m, output } => {
            if *l == 0 || *m == 0 {
                return Err(Failure::Usage(anyhow!("--l and --m must be positive")));
            }
            let g = gen_greedy_bad(*l, *m);
            emit_instance(&AnyGraph::Undirected(g.clone()), elimination(&g), output, out)?;
        }
        GenCommand::ProximityBad { h, m, l, whites, output } => {
            if *h < 9 || h % 2 == 0 || *m == 0 {
                return Err(Failure::Usage(anyhow!("--h must be odd and at least 9, --m positive")));
            }
            let pb = gen_proximity_bad(*h, *m, *l);
            if let Some(path) = whites {
                let set = NodeSet::from_nodes(pb.graph.n(), pb.whites.iter().copied());
                write_to(Some(path), &write_set(&set), out)?;
            }
            emit_instance(&AnyGraph::Undirected(pb.graph.clone()), elimination(&pb.graph), output, out)?;
        }
        GenCommand::Minrep { qa, qb, part_size, p, out: path } => {
            let inst = MinRepInstance::random(*qa, *qb, *part_size, *p, cli.seed).map_err(|e| Failure::Usage(anyhow!(e)))?;
            write_to(path.as_deref(), &inst.to_text(), out)?;
        }
        GenCommand::ReducePds { input, lambda, output } => {
            let r = reduce_minrep_to_pds(&load_minrep(input)?, *lambda).map_err(|e| Failure::Usage(anyhow!(e)))?;
            emit_instance(&AnyGraph::Undirected(r.graph.clone()), elimination(&r.graph), output, out)?;
        }
        GenCommand::ReduceDpds { input, lambda, output } => {
            let r = reduce_minrep_to_directed_pds(&load_minrep(input)?, *lambda).map_err(|e| Failure::Usage(anyhow!(e)))?;
            let under = r.graph.underlying_undirected();
            emit_instance(&AnyGraph::Directed(r.graph), elimination(&under), output, out)?;
        }
        GenCommand::PartialKTree { n, k, keep, output } => {
            if *n == 0 || !(0.0..=1.0).contains(keep) {
                return Err(Failure::Usage(anyhow!("--n must be positive and --keep in [0, 1]")));
            }
            let (g, td) = partial_k_tree(*n, *k, *keep, &mut rng);
            emit_instance(&AnyGraph::Undirected(g), || td, output, out)?;
        }
        GenCommand::Orient { input, both, output } => {
            if !(0.0..=1.0).contains(both) {
                return Err(Failure::Usage(anyhow!("--both must lie in [0, 1]")));
            }
            let g = load_undirected(input)?;
            let d = random_orientation(&g, *both, &mut rng);
            emit_instance(&AnyGraph::Directed(d), elimination(&g), output, out)?;
        }
    }
    Ok(Status::Ok)
}
