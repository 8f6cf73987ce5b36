use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn pds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pds")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&o.stdout))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Generates a grid and returns (graph, td) paths.
fn grid(dir: &Path, rows: usize, cols: usize) -> (PathBuf, PathBuf) {
    let g = dir.join(format!("grid{rows}x{cols}.gr"));
    let td = dir.join(format!("grid{rows}x{cols}.td"));
    let o = pds(&["gen", "grid", "--rows", &rows.to_string(), "--cols", &cols.to_string(), "--out", s(&g), "--td", s(&td)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    (g, td)
}

#[test]
fn tree_exact_on_a_path() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "path5.gr", "p pds 5 4\ne 1 2\ne 2 3\ne 3 4\ne 4 5\n");
    let o = pds(&["--format", "json", "solve", "--method", "tree-exact", "--graph", s(&g)]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["size"], 1);
    assert_eq!(r["feasible"], true);
}

#[test]
fn twd_approx_on_grid_three_by_four() {
    let dir = TempDir::new().unwrap();
    let (g, td) = grid(dir.path(), 3, 4);
    let o = pds(&["--format", "json", "solve", "--method", "twd-approx", "--graph", s(&g), "--td", s(&td)]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["feasible"], true);
    let k = r["width"].as_f64().unwrap();
    assert!(r["ratio_vs_lb"].as_f64().unwrap() <= k + 1.0);
    assert_eq!(r["size"].as_u64().unwrap() as usize, r["solution"].as_array().unwrap().len());
    // every root gives a feasible answer
    for root in 1..=3 {
        let o = pds(&["--format", "json", "solve", "--method", "twd-approx", "--graph", s(&g), "--td", s(&td), "--root", &root.to_string()]);
        assert_eq!(code(&o), 0);
        assert_eq!(json(&o)["config"]["root"], root);
    }
}

#[test]
fn exact_on_three_triangles() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("tri3.gr");
    assert_eq!(code(&pds(&["gen", "triangle-chain", "--t", "3", "--out", s(&g)])), 0);
    let o = pds(&["--format", "json", "solve", "--method", "exact", "--graph", s(&g)]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["size"], 1);
    assert_eq!(r["lower_bound"], 1);
}

#[test]
fn every_undirected_method_verifies() {
    let dir = TempDir::new().unwrap();
    let (g, td) = grid(dir.path(), 4, 4);
    for method in ["exact", "twd-approx", "greedy", "proximity", "cleanup", "partition"] {
        for tb in ["lexicographic", "adversarial", "random"] {
            let o = pds(&["--format", "json", "--seed", "9", "solve", "--method", method, "--graph", s(&g), "--td", s(&td), "--tiebreak", tb]);
            assert_eq!(code(&o), 0, "{method}: {}", String::from_utf8_lossy(&o.stderr));
            assert_eq!(json(&o)["feasible"], true, "{method}");
        }
    }
}

#[test]
fn cleanup_of_a_given_set() {
    let dir = TempDir::new().unwrap();
    let (g, _) = grid(dir.path(), 3, 3);
    let all = write(dir.path(), "all.set", &(1..=9).map(|v| format!("{v}\n")).collect::<String>());
    let o = pds(&["--format", "json", "solve", "--method", "cleanup", "--graph", s(&g), "--set", s(&all)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["size"], 1);
    let none = write(dir.path(), "none.set", "");
    assert_eq!(code(&pds(&["solve", "--method", "cleanup", "--graph", s(&g), "--set", s(&none)])), 1);
}

#[test]
fn verify_column_empty_set_and_trace() {
    let dir = TempDir::new().unwrap();
    let (g, _) = grid(dir.path(), 4, 5);
    let column = write(dir.path(), "col.set", "2\n7\n12\n17\n");
    let o = pds(&["--format", "json", "verify", "--graph", s(&g), "--set", s(&column), "--trace"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["feasible"], true);
    assert_eq!(r["closure_size"], 20);
    let ext: Vec<u64> = r["trace"]["exteriors"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!(ext.windows(2).all(|w| w[0] >= w[1]), "{ext:?}");
    assert_eq!(*ext.last().unwrap(), 0);

    let empty = write(dir.path(), "empty.set", "");
    let o = pds(&["--format", "json", "verify", "--graph", s(&g), "--set", s(&empty)]);
    assert_eq!(code(&o), 2);
    let r = json(&o);
    assert_eq!(r["feasible"], false);
    assert_eq!(r["missing"].as_array().unwrap().len(), 20);

    let o = pds(&["verify", "--graph", s(&g), "--set", s(&empty), "--directed"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn trace_command_uses_one_based_ids() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "p3.gr", "p pds 3 2\ne 1 2\ne 2 3\n");
    let set = write(dir.path(), "one.set", "1\n");
    let o = pds(&["--format", "json", "trace", "--graph", s(&g), "--set", s(&set)]);
    assert_eq!(code(&o), 0);
    let t = json(&o);
    assert_eq!(t["stages"][0], serde_json::json!([1, 2]));
    assert_eq!(t["steps"][1]["rule"], "R2");
    assert_eq!(t["steps"][1]["actor"], 2);
    assert_eq!(t["steps"][1]["added"], serde_json::json!([3]));
    let text = pds(&["trace", "--graph", s(&g), "--set", s(&set)]);
    assert!(String::from_utf8(text.stdout).unwrap().contains("R2 2 -> 3"));
}

#[test]
fn json_is_deterministic_without_time() {
    let dir = TempDir::new().unwrap();
    let (g, _) = grid(dir.path(), 4, 5);
    let args = ["--format", "json", "--no-time", "--seed", "42", "solve", "--method", "greedy", "--graph", s(&g), "--tiebreak", "random"];
    let a = pds(&args);
    let b = pds(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("wall_time_ms"));
    let timed = pds(&args[..2].iter().chain(&args[3..]).copied().collect::<Vec<_>>());
    assert!(String::from_utf8_lossy(&timed.stdout).contains("wall_time_ms"));
}

#[test]
fn usage_and_budget_exit_codes() {
    let dir = TempDir::new().unwrap();
    let (g, _) = grid(dir.path(), 4, 4);
    assert_eq!(code(&pds(&["solve", "--method", "twd-approx", "--graph", s(&g)])), 1);
    assert_eq!(code(&pds(&["solve", "--method", "nonsense", "--graph", s(&g)])), 1);
    assert_eq!(code(&pds(&["solve", "--method", "exact", "--graph", "/nonexistent.gr"])), 1);
    let bad = write(dir.path(), "bad.gr", "p pds 2 1\ne 1 3\n");
    let o = pds(&["solve", "--method", "greedy", "--graph", s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&pds(&["solve", "--method", "exact", "--graph", s(&g), "--budget", "5"])), 3);
    assert_eq!(code(&pds(&["solve", "--method", "exact", "--graph", s(&g), "--size-cap", "1"])), 3);
    assert_eq!(code(&pds(&["solve", "--method", "directed-exact", "--graph", s(&g)])), 1);
    assert_eq!(code(&pds(&["--help"])), 0);
}

#[test]
fn directed_methods() {
    let dir = TempDir::new().unwrap();
    let (g, _) = grid(dir.path(), 3, 3);
    let d = dir.path().join("d.gr");
    let td = dir.path().join("d.td");
    let o = pds(&["--seed", "3", "gen", "orient", "--in", s(&g), "--both", "0.3", "--out", s(&d), "--td", s(&td)]);
    assert_eq!(code(&o), 0);
    let census = dir.path().join("census.json");
    let dp = pds(&["--format", "json", "solve", "--method", "directed-dp", "--graph", s(&d), "--td", s(&td), "--dump-states", s(&census)]);
    assert_eq!(code(&dp), 0, "{}", String::from_utf8_lossy(&dp.stderr));
    let ex = pds(&["--format", "json", "solve", "--method", "directed-exact", "--graph", s(&d)]);
    assert_eq!(code(&ex), 0);
    assert_eq!(json(&dp)["size"], json(&ex)["size"]);
    assert_eq!(json(&dp)["feasible"], true);
    let tables: Value = serde_json::from_str(&std::fs::read_to_string(&census).unwrap()).unwrap();
    let tables = tables.as_array().unwrap();
    assert!(!tables.is_empty());
    assert!(tables.iter().all(|t| t["tnode"].as_u64().unwrap() >= 1 && t["kind"].is_string()));
    let o = pds(&["solve", "--method", "directed-dp", "--graph", s(&d), "--td", s(&td), "--max-states", "1"]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&pds(&["solve", "--method", "directed-dp", "--graph", s(&d)])), 1);
}

#[test]
fn generators_emit_parseable_instances() {
    let dir = TempDir::new().unwrap();
    let p = |name: &str| dir.path().join(name);
    let cases: Vec<Vec<String>> = vec![
        vec!["greedy-bad", "--l", "1", "--m", "1"],
        vec!["proximity-bad", "--h", "9", "--m", "2", "--l", "5"],
        vec!["partial-k-tree", "--n", "12", "--k", "2"],
        vec!["triangle-chain", "--t", "4"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for (i, case) in cases.iter().enumerate() {
        let (gp, tp) = (p(&format!("{i}.gr")), p(&format!("{i}.td")));
        let mut args: Vec<&str> = vec!["gen"];
        args.extend(case.iter().map(String::as_str));
        args.extend(["--out", s(&gp), "--td", s(&tp)]);
        let o = pds(&args);
        assert_eq!(code(&o), 0, "{case:?}: {}", String::from_utf8_lossy(&o.stderr));
        let o = pds(&["--format", "json", "solve", "--method", "twd-approx", "--graph", s(&gp), "--td", s(&tp)]);
        assert_eq!(code(&o), 0, "{case:?}");
    }
    let aug = pds(&["gen", "augment", "--in", s(&p("3.gr"))]);
    assert!(String::from_utf8(aug.stdout).unwrap().starts_with("p pds 24 "));
    assert_eq!(code(&pds(&["gen", "proximity-bad", "--h", "8", "--m", "2", "--l", "5"])), 1);
}

#[test]
fn minrep_pipeline() {
    let dir = TempDir::new().unwrap();
    let mr = dir.path().join("inst.minrep");
    let args = ["--seed", "4", "gen", "minrep", "--qa", "1", "--qb", "2", "--part-size", "1", "--p", "0.9"];
    let a = pds(&args);
    assert_eq!(a.stdout, pds(&args).stdout);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", s(&mr)]);
    assert_eq!(code(&pds(&with_out)), 0);
    let (g, d) = (dir.path().join("r.gr"), dir.path().join("r.dgr"));
    assert_eq!(code(&pds(&["gen", "reduce-pds", "--in", s(&mr), "--out", s(&g)])), 0);
    assert_eq!(code(&pds(&["gen", "reduce-dpds", "--in", s(&mr), "--out", s(&d)])), 0);
    assert_eq!(code(&pds(&["gen", "reduce-pds", "--in", s(&mr), "--lambda", "3"])), 1);
    let u = json(&pds(&["--format", "json", "solve", "--method", "exact", "--graph", s(&g)]));
    let v = json(&pds(&["--format", "json", "solve", "--method", "directed-exact", "--graph", s(&d)]));
    assert_eq!(u["size"], v["size"]);
}

#[test]
fn bench_suites() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("b.csv");
    let js = dir.path().join("b.json");
    let cfg = write(
        dir.path(),
        "bench.toml",
        "threads = 2\n[grid]\nmax-side = 4\n[reduction]\ninstances = 3\n",
    );
    let o = pds(&["--no-time", "bench", "--config", s(&cfg), "--csv", s(&csv), "--json", s(&js)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "suite,instance,n,m,method,seed,size,lower_bound,reference,reference_kind,ratio,feasible,verified,wall_ms"
    );
    let rows: Vec<Value> = serde_json::from_str::<Value>(&std::fs::read_to_string(&js).unwrap()).unwrap().as_array().unwrap().clone();
    assert!(rows.iter().all(|r| r["verified"] == true && r["feasible"] == true));
    let greedy: Vec<f64> = rows
        .iter()
        .filter(|r| r["suite"] == "greedy-gap" && r["method"] == "greedy")
        .map(|r| r["ratio"].as_f64().unwrap())
        .collect();
    assert_eq!(greedy.len(), 3);
    assert!(greedy.windows(2).all(|w| w[0] < w[1]), "{greedy:?}");
    for r in rows.iter().filter(|r| r["method"] == "twd-approx") {
        let name = r["instance"].as_str().unwrap();
        let side: f64 = name["grid-".len()..].split('x').next().unwrap().parse().unwrap();
        assert!(r["ratio"].as_f64().unwrap() <= side + 1.0, "{name}");
    }
    let reduction: Vec<&Value> = rows.iter().filter(|r| r["suite"] == "reduction").collect();
    assert_eq!(reduction.len(), 6);
    assert!(reduction.iter().all(|r| r["size"] == r["reference"]));

    // same seed, different thread count: identical JSON
    let again = pds(&["--no-time", "--format", "json", "bench", "--config", s(&cfg), "--threads", "1"]);
    assert_eq!(again.stdout, std::fs::read(&js).unwrap());
    let bad = write(dir.path(), "bad.toml", "[grid]\nsides = 3\n");
    assert_eq!(code(&pds(&["bench", "--config", s(&bad)])), 1);
}
