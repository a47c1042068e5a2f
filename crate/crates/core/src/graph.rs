//! Simple undirected graphs over dense vertex ids `0..n`, hop distances,
//! complements and powers.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A simple undirected graph. Adjacency lists are sorted and symmetric, with
/// no self-loops and no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::parse(
                    i + 1,
                    format!("edge ({u},{v}) has an endpoint outside 0..{n}"),
                ));
            }
            if u == v {
                return Err(Error::parse(i + 1, format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency })
    }

    /// Builds a graph from a symmetric predicate over unordered pairs.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for u in 0..n {
            for v in (u + 1)..n {
                if adjacent(u, v) {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { adjacency }
    }

    pub fn path(n: usize) -> Self {
        Graph::from_fn(n, |u, v| v == u + 1)
    }

    pub fn cycle(n: usize) -> Self {
        if n < 3 {
            return Graph::path(n);
        }
        Graph::from_fn(n, |u, v| v == u + 1 || (u == 0 && v == n - 1))
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_fn(n, |_, _| true)
    }

    /// The star `K_{1,leaves}` with vertex 0 as its center.
    pub fn star(leaves: usize) -> Self {
        Graph::from_fn(leaves + 1, |u, _| u == 0)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Parses the edge-list format: a header line `n m` followed by `m` lines
    /// `u v`. Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line \"n m\""))?;
        let (n, m) = parse_pair(header_line, header)?;
        if n == 0 {
            return Err(Error::parse(
                header_line,
                "graph must have at least one vertex",
            ));
        }

        let mut adjacency = vec![Vec::new(); n];
        let mut count = 0;
        for (line, content) in lines {
            let (u, v) = parse_pair(line, content)?;
            if u >= n || v >= n {
                return Err(Error::parse(
                    line,
                    format!("vertex id out of range 0..{n} in edge ({u},{v})"),
                ));
            }
            if u == v {
                return Err(Error::parse(line, format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            count += 1;
        }
        if count != m {
            return Err(Error::parse(
                header_line,
                format!("header declares {m} edges but {count} were listed"),
            ));
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency })
    }

    /// Renders the graph in the edge-list format accepted by [`Graph::parse`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Hop distances between all pairs, one breadth-first search per source.
    pub fn all_pairs_distances(&self) -> DistanceMatrix {
        let n = self.n();
        let mut dist = vec![UNREACHABLE; n * n];
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            dist.par_chunks_mut(n.max(1))
                .enumerate()
                .for_each(|(s, row)| self.bfs_into(s, row));
        }
        #[cfg(not(feature = "parallel"))]
        for (s, row) in dist.chunks_mut(n.max(1)).enumerate() {
            self.bfs_into(s, row);
        }
        DistanceMatrix { n, dist }
    }

    fn bfs_into(&self, source: usize, row: &mut [u32]) {
        let mut queue = VecDeque::with_capacity(self.n());
        row[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = row[u] + 1;
            for &v in &self.adjacency[u] {
                if row[v] == UNREACHABLE {
                    row[v] = next;
                    queue.push_back(v);
                }
            }
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut row = vec![UNREACHABLE; self.n()];
        self.bfs_into(0, &mut row);
        row.iter().all(|&d| d != UNREACHABLE)
    }

    /// Same vertex set, edges exactly the non-edges of `self`.
    pub fn complement(&self) -> Graph {
        Graph::from_fn(self.n(), |u, v| !self.has_edge(u, v))
    }

    /// The `k`-th power: `u` and `v` are adjacent iff `1 <= dist(u, v) <= k`.
    pub fn power(&self, k: u32) -> Graph {
        assert!(k >= 1, "graph power requires k >= 1");
        let dist = self.all_pairs_distances();
        Graph::from_fn(self.n(), |u, v| dist.get(u, v) <= k)
    }
}

fn parse_pair(line: usize, content: &str) -> Result<(usize, usize)> {
    let mut fields = content.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let token = fields
            .next()
            .ok_or_else(|| Error::parse(line, format!("expected two integers, missing {what}")))?;
        token
            .parse::<usize>()
            .map_err(|_| Error::parse(line, format!("not a non-negative integer: {token:?}")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if fields.next().is_some() {
        return Err(Error::parse(line, "expected exactly two integers"));
    }
    Ok((a, b))
}

/// Sentinel stored for unreachable pairs. It is larger than any hop distance
/// a graph can realize.
pub const UNREACHABLE: u32 = u32::MAX;

/// Hop distances between all vertex pairs, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Distance between `u` and `v`, or [`UNREACHABLE`].
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    /// Largest distance, `None` when some pair is unreachable. A single vertex
    /// has diameter 0.
    pub fn diameter(&self) -> Option<u32> {
        let mut best = 0;
        for &d in &self.dist {
            if d == UNREACHABLE {
                return None;
            }
            best = best.max(d);
        }
        Some(best)
    }
}
