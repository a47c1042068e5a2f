//! L(p)-labeling semantics: verification, two exact oracles that never touch
//! the TSP reduction, and the end-to-end solve pipeline.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Graph};
use crate::power::l1_labeling_via_coloring;
use crate::reduction::{
    build_instance_from_distances, check_preconditions, greedy_label_with_distances,
    label_from_path, HamiltonianPath, Labeling, PVector,
};
use crate::tsp;

/// A pair of vertices whose labels are closer than their distance allows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub distance: u32,
    pub required: u32,
    pub actual: u64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertices {} and {} at distance {} need a gap of {}, got {}",
            self.u, self.v, self.distance, self.required, self.actual
        )
    }
}

/// Every pair `u < v` with `dist(u, v) = d <= k` and `|l(u) - l(v)| < p_d`.
/// Pairs farther apart than `k` are unconstrained.
pub fn verify_labeling(g: &Graph, p: &PVector, l: &Labeling) -> Result<Vec<Violation>> {
    verify_with_distances(&g.all_pairs_distances(), p, l)
}

pub fn verify_with_distances(
    dist: &DistanceMatrix,
    p: &PVector,
    l: &Labeling,
) -> Result<Vec<Violation>> {
    let n = dist.n();
    if l.len() < n {
        return Err(Error::MissingLabel(l.len()));
    }
    if l.len() > n {
        return Err(Error::UnknownVertex(n));
    }
    let mut violations = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let distance = dist.get(u, v);
            if let Some(required) = p.get(distance) {
                let actual = l.label(u).abs_diff(l.label(v));
                if actual < u64::from(required) {
                    violations.push(Violation {
                        u,
                        v,
                        distance,
                        required,
                        actual,
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// Largest graph the permutation oracle accepts.
pub const PERMUTATION_ORACLE_CAP: usize = 10;

/// Exact minimum span by searching vertex orders, each labeled greedily.
///
/// Sorting any optimal labeling by label gives an order whose greedy
/// labeling is no worse, so the minimum over orders is the optimum for every
/// graph and separation vector. Orders are explored depth-first in
/// lexicographic order; a prefix is abandoned once its last label already
/// reaches the best span found, which keeps the search exact. The returned
/// labeling belongs to the lexicographically smallest optimal order.
pub fn oracle_span_permutations(g: &Graph, p: &PVector) -> Result<Labeling> {
    #[cfg(feature = "parallel")]
    {
        oracle_span_permutations_parallel(g, p)
    }
    #[cfg(not(feature = "parallel"))]
    {
        oracle_span_permutations_sequential(g, p)
    }
}

fn check_oracle_size(g: &Graph) -> Result<()> {
    if g.n() > PERMUTATION_ORACLE_CAP {
        return Err(Error::InstanceTooLarge {
            n: g.n(),
            cap: PERMUTATION_ORACLE_CAP,
        });
    }
    Ok(())
}

struct OrderSearch<'a> {
    dist: &'a DistanceMatrix,
    p: &'a PVector,
    order: Vec<usize>,
    labels: Vec<u64>,
    used: Vec<bool>,
    best: Option<(u64, Vec<u64>)>,
}

impl<'a> OrderSearch<'a> {
    fn new(dist: &'a DistanceMatrix, p: &'a PVector) -> Self {
        let n = dist.n();
        OrderSearch {
            dist,
            p,
            order: Vec::with_capacity(n),
            labels: vec![0; n],
            used: vec![false; n],
            best: None,
        }
    }

    fn next_label(&self, v: usize) -> u64 {
        let row = self.dist.row(v);
        let mut x = self.order.last().map_or(0, |&u| self.labels[u]);
        for &u in &self.order {
            if let Some(sep) = self.p.get(row[u]) {
                x = x.max(self.labels[u] + u64::from(sep));
            }
        }
        x
    }

    /// Extends the current prefix. `shared` is a bound from other workers:
    /// prefixes strictly above it are cut, ties are kept so the
    /// lexicographic winner is independent of scheduling.
    fn extend(&mut self, shared: &dyn Fn() -> u64, publish: &dyn Fn(u64)) {
        let n = self.dist.n();
        for v in 0..n {
            if self.used[v] {
                continue;
            }
            let x = self.next_label(v);
            if self.best.as_ref().is_some_and(|(b, _)| x >= *b) || x > shared() {
                continue;
            }
            self.labels[v] = x;
            self.used[v] = true;
            self.order.push(v);
            if self.order.len() == n {
                self.best = Some((x, self.labels.clone()));
                publish(x);
            } else {
                self.extend(shared, publish);
            }
            self.order.pop();
            self.used[v] = false;
        }
    }

    fn run_from(
        mut self,
        first: usize,
        shared: &dyn Fn() -> u64,
        publish: &dyn Fn(u64),
    ) -> Option<(u64, Vec<u64>)> {
        self.labels[first] = 0;
        self.used[first] = true;
        self.order.push(first);
        if self.dist.n() == 1 {
            publish(0);
            return Some((0, self.labels));
        }
        self.extend(shared, publish);
        self.best
    }
}

pub fn oracle_span_permutations_sequential(g: &Graph, p: &PVector) -> Result<Labeling> {
    check_oracle_size(g)?;
    let dist = g.all_pairs_distances();
    if g.n() == 0 {
        return Ok(Labeling::new(Vec::new()));
    }
    let bound = std::cell::Cell::new(u64::MAX);
    let mut best: Option<(u64, Vec<u64>)> = None;
    for first in 0..g.n() {
        let found = OrderSearch::new(&dist, p)
            .run_from(first, &|| bound.get(), &|x| bound.set(bound.get().min(x)));
        if let Some(candidate) = found {
            if best.as_ref().is_none_or(|(b, _)| candidate.0 < *b) {
                best = Some(candidate);
            }
        }
    }
    Ok(Labeling::new(best.expect("some order completes").1))
}

#[cfg(feature = "parallel")]
pub fn oracle_span_permutations_parallel(g: &Graph, p: &PVector) -> Result<Labeling> {
    use rayon::prelude::*;
    use std::sync::atomic::{AtomicU64, Ordering};

    check_oracle_size(g)?;
    let dist = g.all_pairs_distances();
    if g.n() == 0 {
        return Ok(Labeling::new(Vec::new()));
    }
    let bound = AtomicU64::new(u64::MAX);
    let results: Vec<Option<(u64, Vec<u64>)>> = (0..g.n())
        .into_par_iter()
        .map(|first| {
            OrderSearch::new(&dist, p).run_from(first, &|| bound.load(Ordering::Relaxed), &|x| {
                bound.fetch_min(x, Ordering::Relaxed);
            })
        })
        .collect();
    // first minimum in vertex order keeps the lexicographic tie-break
    let mut best: Option<(u64, Vec<u64>)> = None;
    for candidate in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| candidate.0 < *b) {
            best = Some(candidate);
        }
    }
    Ok(Labeling::new(best.expect("some order completes").1))
}

/// Exact minimum span by depth-first search over label assignments.
///
/// Vertices are assigned in descending-degree order and every label is
/// bounded by one less than the best span found so far, starting from
/// `upper`. Once the optimum is known, a second pass in vertex-id order
/// returns the lexicographically smallest optimal label vector. Returns
/// `None` when no labeling with span at most `upper` exists.
pub fn oracle_span_branch_bound(g: &Graph, p: &PVector, upper: u64) -> Option<Labeling> {
    let n = g.n();
    if n == 0 {
        return Some(Labeling::new(Vec::new()));
    }
    let dist = g.all_pairs_distances();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let mut search = LabelSearch::new(&dist, p);
    let mut best_span = None;
    let mut limit = upper;
    loop {
        let found = search.first_within(&by_degree, limit, true);
        match found {
            Some(labels) => {
                let span = labels.iter().copied().max().unwrap();
                best_span = Some(span);
                if span == 0 {
                    break;
                }
                limit = span - 1;
            }
            None => break,
        }
    }
    let span = best_span?;
    let id_order: Vec<usize> = (0..n).collect();
    let labels = search
        .first_within(&id_order, span, false)
        .expect("optimal span is attainable");
    Some(Labeling::new(labels))
}

struct LabelSearch<'a> {
    dist: &'a DistanceMatrix,
    p: &'a PVector,
    labels: Vec<Option<u64>>,
}

impl<'a> LabelSearch<'a> {
    fn new(dist: &'a DistanceMatrix, p: &'a PVector) -> Self {
        LabelSearch {
            dist,
            p,
            labels: vec![None; dist.n()],
        }
    }

    /// First labeling found with all labels in `0..=limit`, trying labels in
    /// ascending order along `order`. With `mirror` set the first vertex is
    /// restricted to the lower half: reflecting `l -> span - l` maps any
    /// solution into that half.
    fn first_within(&mut self, order: &[usize], limit: u64, mirror: bool) -> Option<Vec<u64>> {
        self.labels.iter_mut().for_each(|l| *l = None);
        if self.assign(order, 0, limit, mirror) {
            Some(self.labels.iter().map(|l| l.unwrap()).collect())
        } else {
            None
        }
    }

    fn fits(&self, v: usize, x: u64) -> bool {
        let row = self.dist.row(v);
        self.labels
            .iter()
            .enumerate()
            .all(|(u, l)| match (l, self.p.get(row[u])) {
                (Some(y), Some(sep)) => x.abs_diff(*y) >= u64::from(sep),
                _ => true,
            })
    }

    fn assign(&mut self, order: &[usize], depth: usize, limit: u64, mirror: bool) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        let top = if mirror && depth == 0 {
            limit / 2
        } else {
            limit
        };
        for x in 0..=top {
            if self.fits(v, x) {
                self.labels[v] = Some(x);
                if self.assign(order, depth + 1, limit, mirror) {
                    return true;
                }
                self.labels[v] = None;
            }
        }
        false
    }
}

/// Which path-TSP solver the pipeline runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Held-Karp dynamic program.
    Exact,
    /// Christofides-style spanning tree plus matching.
    Approx,
    /// Nearest neighbor from every start, then 2-opt / Or-opt.
    Heuristic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Approx => "approx",
            Method::Heuristic => "heuristic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "approx" => Ok(Method::Approx),
            "heuristic" => Ok(Method::Heuristic),
            other => Err(Error::parse(1, format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Run even when `p_max > 2 * p_min`. The labeling is then rebuilt
    /// greedily along the solver's order, which keeps it valid but voids the
    /// optimality and approximation guarantees.
    pub force: bool,
    pub held_karp_cap: usize,
    /// Move limit per start for the local search.
    pub local_search_budget: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            force: false,
            held_karp_cap: tsp::DEFAULT_HELD_KARP_CAP,
            local_search_budget: 10_000,
        }
    }
}

/// What the pipeline can promise about the returned span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    Optimal,
    WithinOneAndAHalf,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: Method,
    pub n: usize,
    pub k: usize,
    pub diameter: u32,
    pub path_order: Vec<usize>,
    pub path_length: u64,
    pub span: u64,
    /// `p_max <= 2 * p_min`; when false the run was forced.
    pub ratio_ok: bool,
    pub guarantee: Guarantee,
    pub verified: bool,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub labeling: Labeling,
    pub report: SolveReport,
}

/// Reduce, solve the path-TSP instance, and map the path back to labels.
pub fn solve(g: &Graph, p: &PVector, method: Method) -> Result<Solution> {
    solve_with(g, p, method, &SolveOptions::default())
}

pub fn solve_with(
    g: &Graph,
    p: &PVector,
    method: Method,
    options: &SolveOptions,
) -> Result<Solution> {
    let started = Instant::now();
    let pre = check_preconditions(g, p);
    let dist = g.all_pairs_distances();
    let inst = build_instance_from_distances(&dist, p)?;
    if !pre.ratio_ok && !options.force {
        return Err(Error::RatioViolated {
            p_max: p.p_max(),
            p_min: p.p_min(),
        });
    }

    let path: HamiltonianPath = match method {
        Method::Exact => tsp::held_karp_path_capped(&inst, options.held_karp_cap)?,
        Method::Approx => tsp::christofides_path(&inst)?,
        Method::Heuristic => tsp::multistart_local_search(&inst, options.local_search_budget),
    };

    let labeling = if pre.ratio_ok {
        label_from_path(&inst, &path)
    } else {
        greedy_label_with_distances(&dist, p, &path.order)
    }
    .normalized();
    let verified = verify_with_distances(&dist, p, &labeling)?.is_empty();
    let guarantee = match (pre.ratio_ok, method) {
        (false, _) | (true, Method::Heuristic) => Guarantee::None,
        (true, Method::Exact) => Guarantee::Optimal,
        (true, Method::Approx) => Guarantee::WithinOneAndAHalf,
    };

    let report = SolveReport {
        method,
        n: g.n(),
        k: p.k(),
        diameter: pre.diameter.unwrap_or(0),
        path_order: path.order,
        path_length: path.length,
        span: labeling.span(),
        ratio_ok: pre.ratio_ok,
        guarantee,
        verified,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    Ok(Solution { labeling, report })
}

/// L(1,...,1)-labeling from an optimal coloring of `G^k`, scaled by `p_max`.
/// Vertices within distance `k` get distinct colors, so every gap is at
/// least `p_max`, and the span is `p_max * lambda_1(G)`.
pub fn pmax_approx_labeling(g: &Graph, p: &PVector) -> Result<Labeling> {
    let ones = l1_labeling_via_coloring(g, p.k())?;
    Ok(ones.scaled(u64::from(p.p_max())))
}

/// JSON form of a labeling: `{"labels": {"<vertex>": label}, "span", "method"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingDocument {
    pub labels: BTreeMap<usize, u64>,
    pub span: u64,
    pub method: String,
}

impl LabelingDocument {
    pub fn new(labeling: &Labeling, method: impl Into<String>) -> Self {
        LabelingDocument {
            labels: labeling.labels().iter().copied().enumerate().collect(),
            span: labeling.span(),
            method: method.into(),
        }
    }

    /// Converts back to a dense labeling over `0..n`.
    pub fn to_labeling(&self, n: usize) -> Result<Labeling> {
        if let Some((&v, _)) = self.labels.range(n..).next() {
            return Err(Error::UnknownVertex(v));
        }
        let labels = (0..n)
            .map(|v| self.labels.get(&v).copied().ok_or(Error::MissingLabel(v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Labeling::new(labels))
    }
}
