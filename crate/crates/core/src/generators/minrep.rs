//! MinRep instances: a bipartite graph whose sides are split into
//! equal-sized parts. A pair of parts `(A_i, B_j)` is a super edge when some
//! edge joins them; a cover picks nodes so that every super edge has a
//! chosen `a ∈ A_i` and a chosen `b ∈ B_j` that are adjacent.
//!
//! Text format (1-based):
//!
//! ```text
//! p minrep <|A|> <|B|> <qA> <qB> <m>
//! pa <i> <a> <a> ...
//! pb <j> <b> <b> ...
//! e <a> <b>
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::io::lines;
use crate::graph::GraphError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinRepError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("no instance with every part pair joined after {attempts} attempts")]
    Sparse { attempts: usize },
    #[error("exhaustive solver limited to {limit} nodes, instance has {n}")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Format(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinRepInstance {
    na: usize,
    nb: usize,
    parts_a: Vec<Vec<usize>>,
    parts_b: Vec<Vec<usize>>,
    /// `(a, b)` with `a < na`, `b < nb`, in insertion order.
    edges: Vec<(usize, usize)>,
    part_of_a: Vec<usize>,
    part_of_b: Vec<usize>,
}

/// A cover: chosen nodes of each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinRepCover {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl MinRepCover {
    pub fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub const MINREP_EXACT_LIMIT: usize = 16;

impl MinRepInstance {
    pub fn new(
        na: usize,
        nb: usize,
        parts_a: Vec<Vec<usize>>,
        parts_b: Vec<Vec<usize>>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, MinRepError> {
        let part_of_a = Self::check_partition("A", na, &parts_a)?;
        let part_of_b = Self::check_partition("B", nb, &parts_b)?;
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= na || b >= nb {
                return Err(MinRepError::Invalid(format!("edge ({a}, {b}) out of range")));
            }
            if !seen.insert((a, b)) {
                return Err(MinRepError::Invalid(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(MinRepInstance {
            na,
            nb,
            parts_a,
            parts_b,
            edges,
            part_of_a,
            part_of_b,
        })
    }

    fn check_partition(side: &str, n: usize, parts: &[Vec<usize>]) -> Result<Vec<usize>, MinRepError> {
        let mut owner = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.len() != parts[0].len() {
                return Err(MinRepError::Invalid(format!("parts of {side} differ in size")));
            }
            for &x in part {
                if x >= n || owner[x] != usize::MAX {
                    return Err(MinRepError::Invalid(format!("{side} node {x} out of range or in two parts")));
                }
                owner[x] = i;
            }
        }
        if owner.contains(&usize::MAX) {
            return Err(MinRepError::Invalid(format!("parts do not cover {side}")));
        }
        Ok(owner)
    }

    pub fn na(&self) -> usize {
        self.na
    }

    pub fn nb(&self) -> usize {
        self.nb
    }

    pub fn parts_a(&self) -> &[Vec<usize>] {
        &self.parts_a
    }

    pub fn parts_b(&self) -> &[Vec<usize>] {
        &self.parts_b
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn part_of_a(&self, a: usize) -> usize {
        self.part_of_a[a]
    }

    pub fn part_of_b(&self, b: usize) -> usize {
        self.part_of_b[b]
    }

    /// Edges of every super edge `(i, j)`, super edges ascending, edges in
    /// insertion order.
    pub fn super_edges(&self) -> BTreeMap<(usize, usize), Vec<(usize, usize)>> {
        let mut map: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for &(a, b) in &self.edges {
            map.entry((self.part_of_a[a], self.part_of_b[b])).or_default().push((a, b));
        }
        map
    }

    pub fn is_cover(&self, cover: &MinRepCover) -> bool {
        let a: BTreeSet<usize> = cover.a.iter().copied().collect();
        let b: BTreeSet<usize> = cover.b.iter().copied().collect();
        self.super_edges()
            .values()
            .all(|es| es.iter().any(|(x, y)| a.contains(x) && b.contains(y)))
    }

    /// Minimum cover by enumerating node subsets of increasing size. Subsets
    /// with fewer chosen parts than some super edge needs are skipped.
    pub fn solve_exact(&self) -> Result<MinRepCover, MinRepError> {
        let n = self.na + self.nb;
        if n > MINREP_EXACT_LIMIT {
            return Err(MinRepError::TooLarge {
                n,
                limit: MINREP_EXACT_LIMIT,
            });
        }
        let supers = self.super_edges();
        let mut masks: Vec<u32> = (0..1u32 << n).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        for mask in masks {
            let has = |x: usize| mask >> x & 1 == 1;
            // every super edge needs both endpoints' parts represented
            let ok = supers.keys().all(|&(i, j)| {
                self.parts_a[i].iter().any(|&a| has(a)) && self.parts_b[j].iter().any(|&b| has(self.na + b))
            });
            if !ok {
                continue;
            }
            let cover = MinRepCover {
                a: (0..self.na).filter(|&a| has(a)).collect(),
                b: (0..self.nb).filter(|&b| has(self.na + b)).collect(),
            };
            if self.is_cover(&cover) {
                return Ok(cover);
            }
        }
        unreachable!("choosing every node covers every super edge")
    }

    /// Random instance with `qa` parts of A and `qb` parts of B, each of
    /// `part_size` nodes, and every A–B pair joined with probability `p`.
    /// Redraws until every part pair is a super edge.
    pub fn random(qa: usize, qb: usize, part_size: usize, p: f64, seed: u64) -> Result<Self, MinRepError> {
        const ATTEMPTS: usize = 1000;
        if qa == 0 || qb == 0 || part_size == 0 {
            return Err(MinRepError::Invalid("parameters must be positive".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(MinRepError::Invalid(format!("probability {p} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (na, nb) = (qa * part_size, qb * part_size);
        let parts = |q: usize| -> Vec<Vec<usize>> {
            (0..q).map(|i| (i * part_size..(i + 1) * part_size).collect()).collect()
        };
        for _ in 0..ATTEMPTS {
            let mut edges = Vec::new();
            for a in 0..na {
                for b in 0..nb {
                    if rng.gen_bool(p) {
                        edges.push((a, b));
                    }
                }
            }
            let inst = MinRepInstance::new(na, nb, parts(qa), parts(qb), edges)?;
            if inst.super_edges().len() == qa * qb {
                return Ok(inst);
            }
        }
        Err(MinRepError::Sparse { attempts: ATTEMPTS })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "p minrep {} {} {} {} {}\n",
            self.na,
            self.nb,
            self.parts_a.len(),
            self.parts_b.len(),
            self.edges.len()
        );
        for (tag, parts) in [("pa", &self.parts_a), ("pb", &self.parts_b)] {
            for (i, part) in parts.iter().enumerate() {
                let _ = write!(out, "{tag} {}", i + 1);
                for &x in part {
                    let _ = write!(out, " {}", x + 1);
                }
                out.push('\n');
            }
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "e {} {}", a + 1, b + 1);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, MinRepError> {
        let mut it = lines(text);
        let header = it.next().ok_or_else(|| GraphError::Parse {
            line: 1,
            column: 1,
            message: "missing `p minrep` header".into(),
        })?;
        header.keyword(0, "p")?;
        header.keyword(1, "minrep")?;
        header.expect_len(7)?;
        let na = header.number(2)?;
        let nb = header.number(3)?;
        let qa = header.number(4)?;
        let qb = header.number(5)?;
        let m = header.number(6)?;
        let mut parts_a = vec![Vec::new(); qa];
        let mut parts_b = vec![Vec::new(); qb];
        let mut edges = Vec::with_capacity(m);
        for line in it {
            match line.tokens[0].1 {
                "pa" | "pb" => {
                    let (parts, q, n) = if line.tokens[0].1 == "pa" {
                        (&mut parts_a, qa, na)
                    } else {
                        (&mut parts_b, qb, nb)
                    };
                    let i = line.id(1, q)?;
                    for k in 2..line.tokens.len() {
                        parts[i].push(line.id(k, n)?);
                    }
                }
                "e" => {
                    line.expect_len(3)?;
                    edges.push((line.id(1, na)?, line.id(2, nb)?));
                }
                other => return Err(line.error(0, format!("unexpected `{other}`")).into()),
            }
        }
        if edges.len() != m {
            return Err(MinRepError::Invalid(format!(
                "header declares {m} edges, found {}",
                edges.len()
            )));
        }
        MinRepInstance::new(na, nb, parts_a, parts_b, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_single_pair_needs_two() {
        let inst = MinRepInstance::random(1, 1, 3, 1.0, 0).unwrap();
        assert_eq!(inst.edges().len(), 9);
        assert_eq!(inst.solve_exact().unwrap().len(), 2);
    }

    #[test]
    fn seed_determinism_and_parts() {
        let a = MinRepInstance::random(2, 2, 2, 0.5, 7).unwrap();
        let b = MinRepInstance::random(2, 2, 2, 0.5, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.parts_a().iter().all(|p| p.len() == 2));
        assert_eq!(a.super_edges().len(), 4);
    }

    #[test]
    fn text_roundtrip() {
        let a = MinRepInstance::random(2, 2, 2, 0.6, 3).unwrap();
        let text = a.to_text();
        let b = MinRepInstance::parse(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_text(), text);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(MinRepInstance::new(2, 1, vec![vec![0], vec![0]], vec![vec![0]], vec![]).is_err());
        assert!(MinRepInstance::new(3, 1, vec![vec![0, 1], vec![2]], vec![vec![0]], vec![]).is_err());
        assert!(MinRepInstance::random(1, 1, 2, 0.0, 1).is_err());
    }

    #[test]
    fn cover_needs_adjacent_pair() {
        // A = {0, 1} one part, B = {0, 1} one part, edges 0-0 and 1-1
        let inst = MinRepInstance::new(2, 2, vec![vec![0, 1]], vec![vec![0, 1]], vec![(0, 0), (1, 1)]).unwrap();
        assert!(!inst.is_cover(&MinRepCover { a: vec![0], b: vec![1] }));
        assert!(inst.is_cover(&MinRepCover { a: vec![1], b: vec![1] }));
    }
}
