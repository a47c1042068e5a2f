//! Graph-power parameters: neighborhood diversity and exact coloring, used by
//! the L(1,...,1) route where labeling `G` is coloring `G^k`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reduction::Labeling;

/// Largest graph the exact coloring accepts.
pub const COLORING_CAP: usize = 24;

/// `u` and `v` are twins when `N(u) \ {v} = N(v) \ {u}`.
pub fn are_twins(g: &Graph, u: usize, v: usize) -> bool {
    let a = g.neighbors(u).iter().filter(|&&x| x != v);
    let b = g.neighbors(v).iter().filter(|&&x| x != u);
    a.eq(b)
}

/// Neighborhood diversity and its twin classes.
///
/// Being twins is an equivalence relation, so comparing each vertex with the
/// first member of every existing class yields the minimum partition.
/// Classes are listed by smallest member.
pub fn neighborhood_diversity(g: &Graph) -> (usize, Vec<Vec<usize>>) {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n() {
        match classes.iter_mut().find(|class| are_twins(g, class[0], v)) {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    (classes.len(), classes)
}

/// Optimal proper coloring: colors `0..chi`, per vertex.
///
/// DSATUR branch and bound. A greedy DSATUR pass gives the initial upper
/// bound; a greedy clique gives the lower bound and is precolored to break
/// color symmetry.
pub fn chromatic_coloring(g: &Graph) -> Result<Vec<u32>> {
    let n = g.n();
    if n > COLORING_CAP {
        return Err(Error::InstanceTooLarge {
            n,
            cap: COLORING_CAP,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let adjacency: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();

    let greedy = dsatur_greedy(&adjacency);
    let clique = greedy_clique(&adjacency);
    let mut search = ColoringSearch {
        adjacency: &adjacency,
        colors: vec![None; n],
        best_count: count_colors(&greedy),
        best: greedy,
        lower: clique.len() as u32,
    };
    if search.best_count > search.lower {
        for (c, &v) in clique.iter().enumerate() {
            search.colors[v] = Some(c as u32);
        }
        search.branch(clique.len() as u32);
    }
    Ok(search.best)
}

fn count_colors(colors: &[u32]) -> u32 {
    colors.iter().copied().max().map_or(0, |c| c + 1)
}

fn saturation(adjacency: &[u64], colors: &[Option<u32>], v: usize) -> (u32, u64) {
    let mut seen = 0u64;
    let mut bits = adjacency[v];
    while bits != 0 {
        let u = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if let Some(c) = colors[u] {
            seen |= 1 << c;
        }
    }
    (seen.count_ones(), seen)
}

/// Uncolored vertex with the most distinct neighbor colors, then the highest
/// degree, then the smallest id.
fn pick_vertex(adjacency: &[u64], colors: &[Option<u32>]) -> Option<(usize, u64)> {
    let mut best: Option<(u32, u32, usize, u64)> = None;
    for v in 0..adjacency.len() {
        if colors[v].is_some() {
            continue;
        }
        let (sat, seen) = saturation(adjacency, colors, v);
        let degree = adjacency[v].count_ones();
        let better = match best {
            None => true,
            Some((s, d, _, _)) => (sat, degree) > (s, d),
        };
        if better {
            best = Some((sat, degree, v, seen));
        }
    }
    best.map(|(_, _, v, seen)| (v, seen))
}

fn dsatur_greedy(adjacency: &[u64]) -> Vec<u32> {
    let mut colors = vec![None; adjacency.len()];
    while let Some((v, seen)) = pick_vertex(adjacency, &colors) {
        colors[v] = Some((!seen).trailing_zeros());
    }
    colors.into_iter().map(Option::unwrap).collect()
}

/// Grows a clique from every vertex by repeatedly adding the candidate with
/// most neighbors among the remaining candidates; keeps the largest.
fn greedy_clique(adjacency: &[u64]) -> Vec<usize> {
    let n = adjacency.len();
    let mut best = Vec::new();
    for start in 0..n {
        let mut clique = vec![start];
        let mut candidates = adjacency[start];
        while candidates != 0 {
            let mut pick = None;
            let mut bits = candidates;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let score = (adjacency[u] & candidates).count_ones();
                if pick.is_none_or(|(s, _)| score > s) {
                    pick = Some((score, u));
                }
            }
            let (_, u) = pick.unwrap();
            clique.push(u);
            candidates &= adjacency[u];
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

struct ColoringSearch<'a> {
    adjacency: &'a [u64],
    colors: Vec<Option<u32>>,
    best: Vec<u32>,
    best_count: u32,
    lower: u32,
}

impl ColoringSearch<'_> {
    fn branch(&mut self, used: u32) {
        if self.best_count == self.lower {
            return;
        }
        let Some((v, seen)) = pick_vertex(self.adjacency, &self.colors) else {
            if used < self.best_count {
                self.best_count = used;
                self.best = self.colors.iter().map(|c| c.unwrap()).collect();
            }
            return;
        };
        // colors 0..used are reusable; a fresh color only if it still beats
        // the incumbent
        let limit = (used + 1).min(self.best_count - 1);
        for c in 0..limit {
            if seen >> c & 1 == 1 {
                continue;
            }
            self.colors[v] = Some(c);
            self.branch(used.max(c + 1));
            self.colors[v] = None;
            if self.best_count == self.lower {
                return;
            }
        }
    }
}

/// Optimal L(1,...,1)-labeling of `g` with `k` constrained distances: an
/// optimal coloring of `G^k`, colors read as labels.
pub fn l1_labeling_via_coloring(g: &Graph, k: usize) -> Result<Labeling> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    assert!(k >= 1, "k must be at least 1");
    let k = u32::try_from(k).unwrap_or(u32::MAX);
    let colors = chromatic_coloring(&g.power(k))?;
    Ok(Labeling::new(colors.into_iter().map(u64::from).collect()))
}
