//! Text formats. All ids in files are 1-based.
//!
//! Graph: comment lines start with `c`; header `p pds <n> <m>` followed by
//! `m` lines `e <u> <v>`, or `p dpds <n> <m>` followed by `a <u> <v>`.
//!
//! Tree decomposition: `s td <#bags> <maxbag> <n>`, then one line
//! `b <bag> <v1> <v2> ...` per bag, then tree edges `<i> <j>`.
//!
//! Node set: one id per line.
//!
//! Writers emit no comments, so `write(read(write(x))) == write(x)` byte for byte.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::{DirectedGraph, GraphError, Node, NodeSet, TreeDecomposition, UndirectedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Undirected,
    Directed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyGraph {
    Undirected(UndirectedGraph),
    Directed(DirectedGraph),
}

impl AnyGraph {
    pub fn kind(&self) -> GraphKind {
        match self {
            AnyGraph::Undirected(_) => GraphKind::Undirected,
            AnyGraph::Directed(_) => GraphKind::Directed,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyGraph::Undirected(g) => g.n(),
            AnyGraph::Directed(d) => d.n(),
        }
    }
}

/// One significant line split into tokens with 1-based columns.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    pub fn error(&self, index: usize, message: impl Into<String>) -> GraphError {
        let column = self
            .tokens
            .get(index)
            .or(self.tokens.last())
            .map_or(1, |t| t.0);
        GraphError::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    pub fn expect_len(&self, len: usize) -> Result<(), GraphError> {
        if self.tokens.len() == len {
            Ok(())
        } else if self.tokens.len() < len {
            Err(self.error(self.tokens.len(), format!("expected {len} fields")))
        } else {
            Err(self.error(len, "trailing field"))
        }
    }

    pub fn keyword(&self, index: usize, word: &str) -> Result<(), GraphError> {
        match self.tokens.get(index) {
            Some(&(_, t)) if t == word => Ok(()),
            Some(&(_, t)) => Err(self.error(index, format!("expected `{word}`, found `{t}`"))),
            None => Err(self.error(index, format!("expected `{word}`"))),
        }
    }

    pub fn number(&self, index: usize) -> Result<usize, GraphError> {
        let &(_, t) = self
            .tokens
            .get(index)
            .ok_or_else(|| self.error(index, "missing number"))?;
        t.parse()
            .map_err(|_| self.error(index, format!("`{t}` is not a non-negative integer")))
    }

    /// A 1-based id converted to 0-based and checked against `n`.
    pub fn id(&self, index: usize, n: usize) -> Result<Node, GraphError> {
        let v = self.number(index)?;
        if v == 0 || v > n {
            return Err(self.error(index, format!("id {v} outside 1..={n}")));
        }
        Ok(v - 1)
    }
}

/// Non-empty, non-comment lines of `text`.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push((s + 1, &raw[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        match tokens.first() {
            None => None,
            Some(&(_, t)) if t.starts_with('c') => None,
            _ => Some(Line {
                number: i + 1,
                tokens,
            }),
        }
    })
}

fn eof(text: &str, message: &str) -> GraphError {
    GraphError::Parse {
        line: text.lines().count().max(1),
        column: 1,
        message: message.to_string(),
    }
}

/// Parses either graph kind, chosen by the header.
pub fn parse_graph(text: &str) -> Result<AnyGraph, GraphError> {
    let mut it = lines(text);
    let header = it.next().ok_or_else(|| eof(text, "missing `p` header"))?;
    header.keyword(0, "p")?;
    let (kind, tag) = match header.tokens.get(1).map(|t| t.1) {
        Some("pds") => (GraphKind::Undirected, "e"),
        Some("dpds") => (GraphKind::Directed, "a"),
        _ => return Err(header.error(1, "expected `pds` or `dpds`")),
    };
    header.expect_len(4)?;
    let n = header.number(2)?;
    let m = header.number(3)?;
    let mut pairs = Vec::with_capacity(m);
    let mut seen = HashSet::new();
    let mut last_line = header.number;
    for line in it {
        last_line = line.number;
        line.keyword(0, tag)?;
        line.expect_len(3)?;
        let u = line.id(1, n)?;
        let v = line.id(2, n)?;
        if pairs.len() == m {
            return Err(line.error(0, format!("more than the {m} declared edges")));
        }
        if u == v {
            return Err(line.error(1, format!("self-loop at node {}", u + 1)));
        }
        let key = match kind {
            GraphKind::Undirected => (u.min(v), u.max(v)),
            GraphKind::Directed => (u, v),
        };
        if !seen.insert(key) {
            return Err(line.error(1, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
        pairs.push((u, v));
    }
    if pairs.len() != m {
        return Err(GraphError::Parse {
            line: last_line,
            column: 1,
            message: format!("header declares {m} edges, found {}", pairs.len()),
        });
    }
    match kind {
        GraphKind::Undirected => UndirectedGraph::from_edges(n, pairs).map(AnyGraph::Undirected),
        GraphKind::Directed => DirectedGraph::from_arcs(n, pairs).map(AnyGraph::Directed),
    }
}

pub fn parse_undirected(text: &str) -> Result<UndirectedGraph, GraphError> {
    match parse_graph(text)? {
        AnyGraph::Undirected(g) => Ok(g),
        AnyGraph::Directed(_) => Err(GraphError::Parse {
            line: 1,
            column: 3,
            message: "expected an undirected `p pds` graph".into(),
        }),
    }
}

pub fn parse_directed(text: &str) -> Result<DirectedGraph, GraphError> {
    match parse_graph(text)? {
        AnyGraph::Directed(d) => Ok(d),
        AnyGraph::Undirected(_) => Err(GraphError::Parse {
            line: 1,
            column: 3,
            message: "expected a directed `p dpds` graph".into(),
        }),
    }
}

pub fn load_graph(path: impl AsRef<Path>, kind: GraphKind) -> Result<AnyGraph, GraphError> {
    let text = std::fs::read_to_string(path)?;
    let g = parse_graph(&text)?;
    if g.kind() != kind {
        return Err(GraphError::Parse {
            line: 1,
            column: 3,
            message: format!("expected a {kind:?} graph, found {:?}", g.kind()),
        });
    }
    Ok(g)
}

pub fn write_undirected(g: &UndirectedGraph) -> String {
    let mut out = format!("p pds {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

pub fn write_directed(d: &DirectedGraph) -> String {
    let mut out = format!("p dpds {} {}\n", d.n(), d.m());
    for &(u, v) in d.arcs() {
        let _ = writeln!(out, "a {} {}", u + 1, v + 1);
    }
    out
}

pub fn write_graph(g: &AnyGraph) -> String {
    match g {
        AnyGraph::Undirected(g) => write_undirected(g),
        AnyGraph::Directed(d) => write_directed(d),
    }
}

pub fn save_graph(path: impl AsRef<Path>, g: &AnyGraph) -> Result<(), GraphError> {
    std::fs::write(path, write_graph(g))?;
    Ok(())
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, GraphError> {
    let mut it = lines(text).peekable();
    let header = it.next().ok_or_else(|| eof(text, "missing `s td` header"))?;
    header.keyword(0, "s")?;
    header.keyword(1, "td")?;
    header.expect_len(5)?;
    let nbags = header.number(2)?;
    let maxbag = header.number(3)?;
    let n = header.number(4)?;
    let mut bags: Vec<Option<Vec<Node>>> = vec![None; nbags];
    let mut edges = Vec::new();
    let mut last_line = header.number;
    for line in it {
        last_line = line.number;
        if line.tokens[0].1 == "b" {
            if !edges.is_empty() {
                return Err(line.error(0, "bag line after tree edges"));
            }
            let id = line.id(1, nbags)?;
            if bags[id].is_some() {
                return Err(line.error(1, format!("bag {} defined twice", id + 1)));
            }
            let mut bag = Vec::with_capacity(line.tokens.len() - 2);
            for k in 2..line.tokens.len() {
                let v = line.id(k, n)?;
                if bag.contains(&v) {
                    return Err(line.error(k, format!("node {} repeated in bag", v + 1)));
                }
                bag.push(v);
            }
            if bag.len() > maxbag {
                return Err(line.error(0, format!("bag larger than declared maximum {maxbag}")));
            }
            bags[id] = Some(bag);
        } else {
            line.expect_len(2)?;
            let i = line.id(0, nbags)?;
            let j = line.id(1, nbags)?;
            if i == j {
                return Err(line.error(1, "tree edge is a loop"));
            }
            edges.push((i, j));
        }
    }
    let mut full = Vec::with_capacity(nbags);
    for (i, bag) in bags.into_iter().enumerate() {
        full.push(bag.ok_or_else(|| GraphError::Parse {
            line: last_line,
            column: 1,
            message: format!("bag {} never defined", i + 1),
        })?);
    }
    TreeDecomposition::new(n, full, edges)
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = format!("s td {} {} {}\n", td.len(), td.max_bag_size(), td.n());
    for (i, bag) in td.bags().iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for &v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &(i, j) in td.tree_edges() {
        let _ = writeln!(out, "{} {}", i + 1, j + 1);
    }
    out
}

pub fn load_td(path: impl AsRef<Path>) -> Result<TreeDecomposition, GraphError> {
    parse_td(&std::fs::read_to_string(path)?)
}

pub fn save_td(path: impl AsRef<Path>, td: &TreeDecomposition) -> Result<(), GraphError> {
    std::fs::write(path, write_td(td))?;
    Ok(())
}

/// Node set file over a universe of `n` nodes; repeated ids are an error.
pub fn parse_set(text: &str, n: usize) -> Result<NodeSet, GraphError> {
    let mut set = NodeSet::new(n);
    for line in lines(text) {
        line.expect_len(1)?;
        let v = line.id(0, n)?;
        if !set.insert(v) {
            return Err(line.error(0, format!("node {} listed twice", v + 1)));
        }
    }
    Ok(set)
}

pub fn write_set(set: &NodeSet) -> String {
    let mut out = String::new();
    for v in set.iter() {
        let _ = writeln!(out, "{}", v + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_from_text() {
        let g = parse_undirected("c a path\np pds 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g, UndirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
    }

    #[test]
    fn self_loop_is_reported_with_position() {
        let err = parse_undirected("p pds 3 1\ne 1 1\n").unwrap_err();
        assert_eq!(
            err,
            GraphError::Parse {
                line: 2,
                column: 3,
                message: "self-loop at node 1".into()
            }
        );
    }

    #[test]
    fn duplicate_and_range_errors() {
        assert!(matches!(
            parse_undirected("p pds 3 2\ne 1 2\ne 2 1\n"),
            Err(GraphError::Parse { line: 3, column: 3, .. })
        ));
        assert!(matches!(
            parse_undirected("p pds 3 1\ne 1 4\n"),
            Err(GraphError::Parse { line: 2, column: 5, .. })
        ));
        assert!(matches!(
            parse_undirected("p pds 3 2\ne 1 2\n"),
            Err(GraphError::Parse { .. })
        ));
        assert!(matches!(
            parse_undirected("p pds 3 x\n"),
            Err(GraphError::Parse { line: 1, column: 9, .. })
        ));
    }

    #[test]
    fn roundtrips_are_byte_exact() {
        let text = "p dpds 3 3\na 2 1\na 1 2\na 3 1\n";
        let d = parse_directed(text).unwrap();
        assert_eq!(write_directed(&d), text);
        let td_text = "s td 2 2 3\nb 1 2 1\nb 2 2 3\n1 2\n";
        let td = parse_td(td_text).unwrap();
        assert_eq!(write_td(&td), td_text);
        let set = parse_set("3\n1\n", 3).unwrap();
        assert_eq!(write_set(&set), "1\n3\n");
    }

    #[test]
    fn td_errors() {
        assert!(parse_td("s td 2 2 3\nb 1 1 2\n").is_err());
        assert!(parse_td("s td 1 1 3\nb 1 1 2\n").is_err());
        assert!(parse_td("s td 1 2 3\nb 1 1 1\n").is_err());
    }
}
