//! Reports printed by the commands. Node ids are 1-based.

use std::fmt::Write as _;

use serde::Serialize;

use pds_core::graph::NodeSet;
use pds_core::propagation::{DominationTrace, Rule};

pub fn one_based(set: &NodeSet) -> Vec<usize> {
    set.iter().map(|v| v + 1).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveConfig {
    pub tiebreak: Option<String>,
    pub budget: Option<u64>,
    pub size_cap: Option<usize>,
    pub root: Option<usize>,
    pub max_width: Option<usize>,
    pub max_states: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub method: String,
    pub graph: String,
    pub n: usize,
    pub solution: Vec<usize>,
    pub size: usize,
    /// Recomputed by the closure engine.
    pub feasible: bool,
    pub lower_bound: Option<usize>,
    pub ratio_vs_lb: Option<f64>,
    pub width: Option<usize>,
    pub explored: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub seed: u64,
    pub config: SolveConfig,
}

impl SolveReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "method       {}", self.method);
        let _ = writeln!(s, "graph        {} ({} nodes)", self.graph, self.n);
        let _ = writeln!(s, "size         {}", self.size);
        let _ = writeln!(s, "feasible     {}", yes_no(self.feasible));
        if let Some(lb) = self.lower_bound {
            let _ = writeln!(s, "lower bound  {lb}");
        }
        if let Some(r) = self.ratio_vs_lb {
            let _ = writeln!(s, "ratio vs lb  {r:.3}");
        }
        if let Some(w) = self.width {
            let _ = writeln!(s, "width        {w}");
        }
        if let Some(e) = self.explored {
            let _ = writeln!(s, "explored     {e}");
        }
        if let Some(t) = self.wall_time_ms {
            let _ = writeln!(s, "time         {t:.3} ms");
        }
        let _ = writeln!(s, "solution     {}", join(&self.solution));
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStepOut {
    pub rule: Rule,
    pub actor: usize,
    pub added: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceOut {
    pub stages: Vec<Vec<usize>>,
    pub steps: Vec<TraceStepOut>,
    pub exteriors: Vec<usize>,
}

impl From<&DominationTrace> for TraceOut {
    fn from(t: &DominationTrace) -> Self {
        TraceOut {
            stages: t.stages.iter().map(one_based).collect(),
            steps: t
                .steps
                .iter()
                .map(|s| TraceStepOut {
                    rule: s.rule,
                    actor: s.actor + 1,
                    added: s.added.iter().map(|v| v + 1).collect(),
                })
                .collect(),
            exteriors: t.exteriors.clone(),
        }
    }
}

impl TraceOut {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "stage 0: {} nodes, exterior {}", self.stages[0].len(), self.exteriors[0]);
        let mut stage = 0;
        for step in &self.steps {
            match step.rule {
                Rule::R1 => {
                    let _ = writeln!(s, "  R1 {} -> {}", step.actor, join(&step.added));
                }
                Rule::R2 => {
                    stage += 1;
                    let _ = writeln!(
                        s,
                        "stage {stage}: R2 {} -> {}, exterior {}",
                        step.actor,
                        join(&step.added),
                        self.exteriors[stage]
                    );
                }
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub graph: String,
    pub n: usize,
    pub set: Vec<usize>,
    pub feasible: bool,
    pub closure_size: usize,
    pub missing: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceOut>,
}

impl VerifyReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph        {} ({} nodes)", self.graph, self.n);
        let _ = writeln!(s, "set          {}", join(&self.set));
        let _ = writeln!(s, "feasible     {}", yes_no(self.feasible));
        let _ = writeln!(s, "closure      {} of {}", self.closure_size, self.n);
        if !self.missing.is_empty() {
            let _ = writeln!(s, "missing      {}", join(&self.missing));
        }
        if let Some(t) = &self.trace {
            s.push_str(&t.text());
        }
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn join(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}
