//! Graph families, seeded random models, and exhaustive enumeration of small
//! graphs up to isomorphism.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Attempts before rejection sampling gives up.
pub const MAX_REJECTION_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// `G(n, edge_prob)` conditioned on being connected with diameter at most
    /// `diameter_cap`.
    Random {
        edge_prob: f64,
        diameter_cap: u32,
    },
    Path,
    Cycle,
    /// Center 0 and `n - 1` leaves.
    Star,
    Complete,
    /// Clique on the first `ceil(n / 2)` vertices, independent set on the
    /// rest, each independent vertex joined to a random nonempty subset of
    /// the clique.
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Random,
    Path,
    Cycle,
    Star,
    Complete,
    Split,
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random" => ModelKind::Random,
            "path" => ModelKind::Path,
            "cycle" => ModelKind::Cycle,
            "star" => ModelKind::Star,
            "complete" => ModelKind::Complete,
            "split" => ModelKind::Split,
            other => return Err(Error::parse(1, format!("unknown model {other:?}"))),
        })
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Random => "random",
            ModelKind::Path => "path",
            ModelKind::Cycle => "cycle",
            ModelKind::Star => "star",
            ModelKind::Complete => "complete",
            ModelKind::Split => "split",
        })
    }
}

/// Deterministic for a given `(model, n, seed)`.
pub fn generate(model: Model, n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Generation("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match model {
        Model::Path => Graph::path(n),
        Model::Cycle => Graph::cycle(n),
        Model::Star => Graph::star(n - 1),
        Model::Complete => Graph::complete(n),
        Model::Split => split_graph(n, &mut rng),
        Model::Random {
            edge_prob,
            diameter_cap,
        } => {
            if !(0.0..=1.0).contains(&edge_prob) {
                return Err(Error::Generation(format!(
                    "edge probability {edge_prob} outside [0, 1]"
                )));
            }
            random_connected(n, edge_prob, diameter_cap, &mut rng)?
        }
    })
}

fn split_graph(n: usize, rng: &mut impl Rng) -> Graph {
    let clique = n.div_ceil(2);
    let mut edges = Vec::new();
    for u in 0..clique {
        for v in (u + 1)..clique {
            edges.push((u, v));
        }
    }
    for v in clique..n {
        let anchor = rng.random_range(0..clique);
        for u in 0..clique {
            if u == anchor || rng.random_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("edges in range")
}

/// Rejection-samples `G(n, edge_prob)` until it is connected with diameter at
/// most `diameter_cap`.
pub fn random_connected(
    n: usize,
    edge_prob: f64,
    diameter_cap: u32,
    rng: &mut impl Rng,
) -> Result<Graph> {
    for _ in 0..MAX_REJECTION_ATTEMPTS {
        let g = Graph::from_fn(n, |_, _| rng.random_bool(edge_prob));
        if g.all_pairs_distances()
            .diameter()
            .is_some_and(|d| d <= diameter_cap)
        {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no connected graph with n={n}, p={edge_prob}, diameter <= {diameter_cap} after {MAX_REJECTION_ATTEMPTS} attempts"
    )))
}

/// Canonical form of a graph with at most 11 vertices: the smallest
/// upper-triangle adjacency bit string over all orderings reachable by
/// individualization and refinement. Isomorphic graphs, and only those, get
/// the same value.
pub fn canonical_form(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= 11, "canonical_form supports at most 11 vertices");
    let adjacency: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let mut best = u64::MAX;
    search_leaves(&adjacency, vec![(0..n).collect()], &mut best);
    best
}

fn search_leaves(adjacency: &[u32], cells: Vec<Vec<usize>>, best: &mut u64) {
    let cells = refine(adjacency, cells);
    match cells.iter().position(|c| c.len() > 1) {
        None => {
            let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
            *best = (*best).min(certificate(adjacency, &order));
        }
        Some(target) => {
            for &v in &cells[target] {
                let mut next = Vec::with_capacity(cells.len() + 1);
                next.extend_from_slice(&cells[..target]);
                next.push(vec![v]);
                next.push(cells[target].iter().copied().filter(|&u| u != v).collect());
                next.extend_from_slice(&cells[target + 1..]);
                search_leaves(adjacency, next, best);
            }
        }
    }
}

/// Splits cells by how many neighbors each vertex has in every cell, until
/// stable. Subcells are ordered by that count vector, which keeps the result
/// independent of vertex names.
fn refine(adjacency: &[u32], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u32> = cells
            .iter()
            .map(|c| c.iter().fold(0u32, |m, &v| m | 1 << v))
            .collect();
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    (
                        masks
                            .iter()
                            .map(|m| (adjacency[v] & m).count_ones())
                            .collect(),
                        v,
                    )
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn certificate(adjacency: &[u32], order: &[usize]) -> u64 {
    let mut bits = 0u64;
    for i in 0..order.len() {
        for j in (i + 1)..order.len() {
            bits = bits << 1 | u64::from(adjacency[order[i]] >> order[j] & 1);
        }
    }
    bits
}

/// One representative of every isomorphism class of graphs on `n` vertices,
/// built by attaching a new vertex in every possible way to each class on
/// `n - 1` vertices. Ordered by canonical form.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(
        (1..=11).contains(&n),
        "enumeration supports 1..=11 vertices"
    );
    let mut level = vec![Graph::empty(1)];
    for size in 2..=n {
        let mut seen: HashMap<u64, Graph> = HashMap::new();
        for g in &level {
            let base: Vec<(usize, usize)> = g.edges().collect();
            let new = size - 1;
            for subset in 0u32..(1 << new) {
                let mut edges = base.clone();
                edges.extend((0..new).filter(|&u| subset >> u & 1 == 1).map(|u| (u, new)));
                let h = Graph::from_edges(size, &edges).expect("valid edges");
                seen.entry(canonical_form(&h)).or_insert(h);
            }
        }
        let mut keyed: Vec<(u64, Graph)> = seen.into_iter().collect();
        keyed.sort_by_key(|(k, _)| *k);
        level = keyed.into_iter().map(|(_, g)| g).collect();
    }
    level
}

pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n)
        .into_iter()
        .filter(Graph::is_connected)
        .collect()
}
