use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pds_core::heuristics::TieBreak;

#[derive(Debug, Parser)]
#[command(name = "pds", version, about = "Power dominating set solvers, generators and benchmarks")]
pub struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Seed for randomized tie-breaking and random generators.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Leave wall-clock times out of reports.
    #[arg(long, global = true)]
    pub no_time: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one solver and verify its output.
    Solve(SolveArgs),
    /// Check whether a node set power dominates a graph.
    Verify(VerifyArgs),
    /// Write an instance file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run a benchmark suite.
    Bench(BenchArgs),
    /// Print the staged closure of a node set.
    Trace(TraceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    TwdApprox,
    TreeExact,
    Greedy,
    Proximity,
    Cleanup,
    Partition,
    DirectedExact,
    DirectedDp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::TwdApprox => "twd-approx",
            Method::TreeExact => "tree-exact",
            Method::Greedy => "greedy",
            Method::Proximity => "proximity",
            Method::Cleanup => "cleanup",
            Method::Partition => "partition",
            Method::DirectedExact => "directed-exact",
            Method::DirectedDp => "directed-dp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieMode {
    #[value(alias = "lex")]
    Lexicographic,
    Adversarial,
    /// Seeded by `--seed`.
    Random,
}

impl TieMode {
    pub fn with_seed(self, seed: u64) -> TieBreak {
        match self {
            TieMode::Lexicographic => TieBreak::Lexicographic,
            TieMode::Adversarial => TieBreak::AdversarialCenterFirst,
            TieMode::Random => TieBreak::SeededRandom(seed),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long)]
    pub graph: PathBuf,
    /// Tree decomposition (twd-approx, directed-dp).
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Root t-node of the decomposition (1-based).
    #[arg(long)]
    pub root: Option<usize>,
    #[arg(long, value_enum, default_value_t = TieMode::Lexicographic)]
    pub tiebreak: TieMode,
    /// Starting set for cleanup; greedy output when absent.
    #[arg(long)]
    pub set: Option<PathBuf>,
    /// Candidate budget of the exact solvers.
    #[arg(long, default_value_t = pds_core::exact::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Largest solution size the exact solvers try.
    #[arg(long)]
    pub size_cap: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_width: usize,
    #[arg(long, default_value_t = 2_000_000)]
    pub max_states: usize,
    /// Write the per-table state census of directed-dp as JSON.
    #[arg(long)]
    pub dump_states: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// One 1-based node id per line.
    #[arg(long)]
    pub set: PathBuf,
    /// Require a directed graph file.
    #[arg(long)]
    pub directed: bool,
    /// Include the staged closure.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub set: PathBuf,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Graph file to write; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a tree decomposition.
    #[arg(long)]
    pub td: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        output: Output,
    },
    TriangleChain {
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Attach a pendant node to every node.
    Augment {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    GreedyBad {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        output: Output,
    },
    ProximityBad {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        /// Write the white nodes as a set file.
        #[arg(long)]
        whites: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Random MinRep instance whose super graph is complete.
    Minrep {
        #[arg(long)]
        qa: usize,
        #[arg(long)]
        qb: usize,
        #[arg(long)]
        part_size: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    ReducePds {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = pds_core::generators::DEFAULT_LAMBDA)]
        lambda: usize,
        #[command(flatten)]
        output: Output,
    },
    ReduceDpds {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = pds_core::generators::DEFAULT_LAMBDA)]
        lambda: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Random partial k-tree with its decomposition.
    PartialKTree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.8)]
        keep: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Random orientation of an undirected graph.
    Orient {
        #[arg(long = "in")]
        input: PathBuf,
        /// Probability that an edge becomes an antiparallel pair.
        #[arg(long, default_value_t = 0.0)]
        both: f64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    GreedyGap,
    Grid,
    Reduction,
    All,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// TOML file overriding the suite parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads; the config value or the core count when absent.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}
