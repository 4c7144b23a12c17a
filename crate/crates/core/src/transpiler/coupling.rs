//! Device connectivity.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Undirected, connected coupling graph over `n` physical qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    dist: Vec<Vec<usize>>,
}

impl CouplingMap {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("coupling map needs at least one qubit".into()));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Validation(format!(
                    "edge {a}-{b} references a qubit outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Validation(format!("self-loop on qubit {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let dist: Vec<Vec<usize>> = (0..n).map(|s| bfs(&adjacency, s)).collect();
        if dist[0].contains(&usize::MAX) {
            return Err(Error::Validation("coupling map is not connected".into()));
        }
        Ok(CouplingMap {
            n,
            edges: set,
            adjacency,
            dist,
        })
    }

    /// A path `0 - 1 - … - (n-1)`.
    pub fn line(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        text.parse()
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.dist[a][b]
    }
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if d[y] == usize::MAX {
                d[y] = d[x] + 1;
                q.push_back(y);
            }
        }
    }
    d
}

/// Text form: optional `qubits N` line, then one `a-b` edge per line (several
/// per line allowed, separated by whitespace or commas). `#` starts a comment.
impl FromStr for CouplingMap {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("qubits") {
                let n = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad qubit count {:?}", rest.trim())))?;
                declared = Some(n);
                continue;
            }
            for token in line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
            {
                let (a, b) = token
                    .split_once('-')
                    .ok_or_else(|| Error::parse(line_no, format!("expected an edge like 3-4, got {token:?}")))?;
                let parse = |s: &str| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(line_no, format!("bad qubit index {s:?}")))
                };
                edges.push((parse(a)?, parse(b)?));
            }
        }
        let inferred = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        let n = declared.unwrap_or(inferred);
        Self::new(n, &edges)
    }
}

impl fmt::Display for CouplingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n)?;
        for (a, b) in self.edges() {
            writeln!(f, "{a}-{b}")?;
        }
        Ok(())
    }
}
