//! Reduction from L(p)-labeling on graphs of diameter at most `k` to
//! free-endpoint path TSP on a complete weighted graph, and the reverse map
//! from Hamiltonian paths back to labelings.
//!
//! For a pair at hop distance `d` the reduced instance carries weight `p_d`.
//! When `p_max <= 2 * p_min` those weights lie in `[p_min, 2 * p_min]`, so the
//! instance is metric, and the minimum-span labeling whose labels are
//! nondecreasing along an order is exactly the prefix sum of weights along
//! that order. Minimizing span is then minimizing Hamiltonian path length.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Graph};

/// Separation requirements `(p_1, ..., p_k)`: vertices at distance `d <= k`
/// need labels at least `p_d` apart. Entries are strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct PVector(Vec<u32>);

impl PVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyPVector);
        }
        if let Some(i) = entries.iter().position(|&p| p == 0) {
            return Err(Error::ZeroEntry { index: i + 1 });
        }
        Ok(PVector(entries))
    }

    /// The all-ones vector of length `k`.
    pub fn ones(k: usize) -> Self {
        assert!(k >= 1);
        PVector(vec![1; k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `p_d` for `1 <= d <= k`; `None` for larger distances, which carry no
    /// constraint.
    pub fn get(&self, d: u32) -> Option<u32> {
        if d == 0 {
            return None;
        }
        self.0.get(d as usize - 1).copied()
    }

    pub fn p_min(&self) -> u32 {
        *self.0.iter().min().unwrap()
    }

    pub fn p_max(&self) -> u32 {
        *self.0.iter().max().unwrap()
    }

    pub fn ratio_ok(&self) -> bool {
        u64::from(self.p_max()) <= 2 * u64::from(self.p_min())
    }

    pub fn scaled(&self, c: u32) -> Self {
        assert!(c >= 1);
        PVector(self.0.iter().map(|&p| p * c).collect())
    }

    /// Extends the vector to length `k` by appending copies of `p_min`.
    /// Leaves it unchanged when it is already long enough.
    pub fn padded_to(&self, k: usize) -> Self {
        let mut entries = self.0.clone();
        let fill = self.p_min();
        while entries.len() < k {
            entries.push(fill);
        }
        PVector(entries)
    }
}

impl TryFrom<Vec<u32>> for PVector {
    type Error = Error;

    fn try_from(entries: Vec<u32>) -> Result<Self> {
        PVector::new(entries)
    }
}

impl From<PVector> for Vec<u32> {
    fn from(p: PVector) -> Self {
        p.0
    }
}

impl FromStr for PVector {
    type Err = Error;

    /// Comma-separated positive integers, e.g. `2,1`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<u32>()
                    .map_err(|_| Error::parse(1, format!("not a non-negative integer: {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PVector::new(entries)
    }
}

impl fmt::Display for PVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Complete edge-weighted graph on `n` vertices with a symmetric weight matrix
/// and zero diagonal. Built by [`build_instance`] it is metric whenever the
/// separation vector satisfies `p_max <= 2 * p_min`; matrices supplied through
/// [`MetricInstance::from_matrix`] are not checked for metricity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricInstance {
    n: usize,
    w: Vec<u32>,
}

impl MetricInstance {
    /// Wraps a row-major `n * n` matrix. The matrix must be symmetric with a
    /// zero diagonal.
    pub fn from_matrix(n: usize, w: Vec<u32>) -> Result<Self> {
        if w.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for n={n}, got {}",
                n * n,
                w.len()
            )));
        }
        for u in 0..n {
            if w[u * n + u] != 0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {u}")));
            }
            for v in (u + 1)..n {
                if w[u * n + v] != w[v * n + u] {
                    return Err(Error::InvalidMatrix(format!("asymmetric at ({u},{v})")));
                }
            }
        }
        Ok(MetricInstance { n, w })
    }

    /// Instance whose weight for each pair is `weight(u, v)` with `u < v`.
    pub fn from_fn(n: usize, mut weight: impl FnMut(usize, usize) -> u32) -> Self {
        let mut w = vec![0; n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                let x = weight(u, v);
                w[u * n + v] = x;
                w[v * n + u] = x;
            }
        }
        MetricInstance { n, w }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> u32 {
        self.w[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.w[u * self.n..(u + 1) * self.n]
    }

    pub fn max_weight(&self) -> u32 {
        self.w.iter().copied().max().unwrap_or(0)
    }

    /// Sum of consecutive weights along `order`.
    pub fn path_length(&self, order: &[usize]) -> u64 {
        order
            .windows(2)
            .map(|pair| u64::from(self.weight(pair[0], pair[1])))
            .sum()
    }

    /// First triple `(u, via, v)` in lexicographic order with
    /// `w(u, v) > w(u, via) + w(via, v)`.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for u in 0..n {
            for via in 0..n {
                let left = u64::from(self.weight(u, via));
                for v in 0..n {
                    if u64::from(self.weight(u, v)) > left + u64::from(self.weight(via, v)) {
                        return Some((u, via, v));
                    }
                }
            }
        }
        None
    }

    pub fn is_metric(&self) -> bool {
        self.triangle_violation().is_none()
    }

    pub fn ensure_metric(&self) -> Result<()> {
        match self.triangle_violation() {
            Some((u, via, v)) => Err(Error::NonMetricInstance { u, via, v }),
            None => Ok(()),
        }
    }
}

/// A vertex order together with its length under the instance it was built
/// against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianPath {
    pub order: Vec<usize>,
    pub length: u64,
}

impl HamiltonianPath {
    /// Validates that `order` is a permutation of `0..inst.n()` and computes
    /// its length.
    pub fn new(inst: &MetricInstance, order: Vec<usize>) -> Result<Self> {
        if !is_permutation(&order, inst.n()) {
            return Err(Error::InvalidPath { n: inst.n(), order });
        }
        let length = inst.path_length(&order);
        Ok(HamiltonianPath { order, length })
    }

    pub(crate) fn from_order_unchecked(inst: &MetricInstance, order: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&order, inst.n()));
        let length = inst.path_length(&order);
        HamiltonianPath { order, length }
    }
}

pub(crate) fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    true
}

/// Label per vertex. The span is the largest label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    labels: Vec<u64>,
}

impl Labeling {
    pub fn new(labels: Vec<u64>) -> Self {
        Labeling { labels }
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn span(&self) -> u64 {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// Shifts all labels down so the smallest is 0.
    pub fn normalized(mut self) -> Self {
        if let Some(&low) = self.labels.iter().min() {
            for l in &mut self.labels {
                *l -= low;
            }
        }
        self
    }

    pub fn scaled(&self, c: u64) -> Self {
        Labeling::new(self.labels.iter().map(|&l| l * c).collect())
    }
}

/// Which of the reduction's two preconditions hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preconditions {
    /// Connected with diameter at most `k`.
    pub diameter_ok: bool,
    /// `p_max <= 2 * p_min`.
    pub ratio_ok: bool,
    /// `None` for a disconnected graph.
    pub diameter: Option<u32>,
}

impl Preconditions {
    pub fn hold(&self) -> bool {
        self.diameter_ok && self.ratio_ok
    }
}

pub fn check_preconditions(g: &Graph, p: &PVector) -> Preconditions {
    let diameter = g.all_pairs_distances().diameter();
    Preconditions {
        diameter_ok: diameter.is_some_and(|d| d as usize <= p.k()),
        ratio_ok: p.ratio_ok(),
        diameter,
    }
}

/// Builds the complete instance with `w(u, v) = p_{dist(u, v)}`.
///
/// Fails when the graph is disconnected or has a pair farther apart than
/// `k`. The ratio condition is not enforced here; callers that need a metric
/// instance check [`PVector::ratio_ok`] or [`MetricInstance::is_metric`].
pub fn build_instance(g: &Graph, p: &PVector) -> Result<MetricInstance> {
    let dist = g.all_pairs_distances();
    build_instance_from_distances(&dist, p)
}

pub fn build_instance_from_distances(dist: &DistanceMatrix, p: &PVector) -> Result<MetricInstance> {
    let diameter = dist.diameter().ok_or(Error::Disconnected)?;
    if diameter as usize > p.k() {
        return Err(Error::DiameterExceedsK { diameter, k: p.k() });
    }
    Ok(MetricInstance::from_fn(dist.n(), |u, v| {
        p.get(dist.get(u, v)).expect("distance within k")
    }))
}

/// Labels each vertex with the length of the path prefix ending at it.
pub fn label_from_path(inst: &MetricInstance, path: &HamiltonianPath) -> Labeling {
    let mut labels = vec![0u64; inst.n()];
    let mut acc = 0u64;
    for (i, &v) in path.order.iter().enumerate() {
        if i > 0 {
            acc += u64::from(inst.weight(path.order[i - 1], v));
        }
        labels[v] = acc;
    }
    Labeling::new(labels)
}

/// Minimum-span labeling among those nondecreasing along `order`.
///
/// Each vertex takes the smallest label that is at least its predecessor's
/// and at least `l(u) + p_d` for every earlier `u` at distance `d <= k`.
/// Valid for any graph and any separation vector.
pub fn greedy_label_for_order(g: &Graph, p: &PVector, order: &[usize]) -> Labeling {
    greedy_label_with_distances(&g.all_pairs_distances(), p, order)
}

pub fn greedy_label_with_distances(
    dist: &DistanceMatrix,
    p: &PVector,
    order: &[usize],
) -> Labeling {
    assert!(
        is_permutation(order, dist.n()),
        "order must be a permutation"
    );
    let mut labels = vec![0u64; dist.n()];
    let mut prev = 0u64;
    for (i, &v) in order.iter().enumerate() {
        let row = dist.row(v);
        let mut x = prev;
        for &u in &order[..i] {
            if let Some(sep) = p.get(row[u]) {
                x = x.max(labels[u] + u64::from(sep));
            }
        }
        labels[v] = x;
        prev = x;
    }
    Labeling::new(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PVector {
        s.parse().unwrap()
    }

    #[test]
    fn pvector_parsing() {
        let v = p("2,1");
        assert_eq!(v.k(), 2);
        assert_eq!((v.p_min(), v.p_max()), (1, 2));
        assert_eq!(v.get(1), Some(2));
        assert_eq!(v.get(3), None);
        assert_eq!("2,0".parse::<PVector>(), Err(Error::ZeroEntry { index: 2 }));
        assert!(matches!("2,a".parse::<PVector>(), Err(Error::Parse { .. })));
        assert!(matches!("".parse::<PVector>(), Err(Error::Parse { .. })));
        assert_eq!(PVector::new(vec![]), Err(Error::EmptyPVector));
        assert_eq!(p("3,2").padded_to(4), p("3,2,2,2"));
        assert_eq!(p("3,2").scaled(2), p("6,4"));
    }

    #[test]
    fn preconditions() {
        let check = |g: &Graph, s: &str| {
            let r = check_preconditions(g, &p(s));
            (r.diameter_ok, r.ratio_ok)
        };
        assert_eq!(check(&Graph::path(3), "2,1"), (true, true));
        assert_eq!(check(&Graph::path(4), "2,1"), (false, true));
        assert_eq!(check(&Graph::path(3), "3,1"), (true, false));
        assert_eq!(check(&Graph::empty(2), "1,1"), (false, true));
    }

    #[test]
    fn instance_weights() {
        let h = build_instance(&Graph::path(3), &p("2,1")).unwrap();
        assert_eq!((h.weight(0, 1), h.weight(1, 2), h.weight(0, 2)), (2, 2, 1));

        let h = build_instance(&Graph::complete(3), &p("2,1")).unwrap();
        assert!((0..3).all(|u| (0..3).all(|v| h.weight(u, v) == if u == v { 0 } else { 2 })));

        let h = build_instance(&Graph::star(3), &p("2,1")).unwrap();
        for leaf in 1..4 {
            assert_eq!(h.weight(0, leaf), 2);
            for other in (leaf + 1)..4 {
                assert_eq!(h.weight(leaf, other), 1);
            }
        }
    }

    #[test]
    fn instance_errors() {
        assert_eq!(
            build_instance(&Graph::path(4), &p("2,1")),
            Err(Error::DiameterExceedsK { diameter: 3, k: 2 })
        );
        assert_eq!(
            build_instance(&Graph::empty(2), &p("2,1")),
            Err(Error::Disconnected)
        );
        // trailing entries beyond the diameter are unused
        assert!(build_instance(&Graph::complete(3), &p("2,1,1")).is_ok());
    }

    #[test]
    fn labels_from_paths() {
        let h = build_instance(&Graph::path(3), &p("2,1")).unwrap();
        let path = HamiltonianPath::new(&h, vec![1, 0, 2]).unwrap();
        let l = label_from_path(&h, &path);
        assert_eq!(l.labels(), &[2, 0, 3]);
        assert_eq!(l.span(), 3);
        assert_eq!(path.length, 3);

        let h1 = build_instance(&Graph::empty(1), &p("2,1")).unwrap();
        let single = HamiltonianPath::new(&h1, vec![0]).unwrap();
        assert_eq!(single.length, 0);
        assert_eq!(label_from_path(&h1, &single).labels(), &[0]);

        let k3 = build_instance(&Graph::complete(3), &p("2,1")).unwrap();
        let path = HamiltonianPath::new(&k3, vec![0, 1, 2]).unwrap();
        assert_eq!(label_from_path(&k3, &path).labels(), &[0, 2, 4]);
    }

    #[test]
    fn invalid_paths_rejected() {
        let h = build_instance(&Graph::path(3), &p("2,1")).unwrap();
        assert!(matches!(
            HamiltonianPath::new(&h, vec![0, 0, 1]),
            Err(Error::InvalidPath { .. })
        ));
        assert!(matches!(
            HamiltonianPath::new(&h, vec![0, 1]),
            Err(Error::InvalidPath { .. })
        ));
        assert!(matches!(
            HamiltonianPath::new(&h, vec![0, 1, 3]),
            Err(Error::InvalidPath { .. })
        ));
    }

    #[test]
    fn greedy_examples() {
        let g = Graph::path(3);
        assert_eq!(greedy_label_for_order(&g, &p("2,1"), &[1, 0, 2]).span(), 3);
        let l = greedy_label_for_order(&g, &p("2,1"), &[0, 1, 2]);
        assert_eq!(l.labels(), &[0, 2, 4]);
        assert_eq!(
            greedy_label_for_order(&Graph::empty(1), &p("5"), &[0]).span(),
            0
        );
    }

    #[test]
    fn greedy_ignores_pairs_beyond_k() {
        // P4 with k=2: the endpoints are unconstrained
        let l = greedy_label_for_order(&Graph::path(4), &p("1,1"), &[0, 3, 1, 2]);
        assert_eq!(l.labels(), &[0, 1, 2, 0]);
    }

    #[test]
    fn matrix_validation() {
        assert!(MetricInstance::from_matrix(2, vec![0, 1, 1, 0]).is_ok());
        assert!(MetricInstance::from_matrix(2, vec![0, 1, 2, 0]).is_err());
        assert!(MetricInstance::from_matrix(2, vec![1, 1, 1, 0]).is_err());
        assert!(MetricInstance::from_matrix(2, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn ratio_three_to_one_breaks_metricity_on_c5() {
        let h = build_instance(&Graph::cycle(5), &p("3,1")).unwrap();
        assert_eq!(h.triangle_violation(), Some((0, 2, 4)));
        assert!(build_instance(&Graph::cycle(5), &p("2,1"))
            .unwrap()
            .is_metric());
    }
}
