//! Christofides-style approximation for path TSP with free endpoints.
//!
//! Spanning tree, then a minimum matching on the tree's odd-degree vertices
//! that leaves two of them unmatched. Those two are the only odd vertices of
//! the combined multigraph, so it has an Euler trail between them; skipping
//! repeated vertices on that trail gives a Hamiltonian path of length at most
//! 1.5 times the optimum on a metric instance.

use crate::error::Result;
use crate::reduction::{HamiltonianPath, MetricInstance};
use crate::tsp::matching::min_weight_matching_leave_two;

pub fn christofides_path(inst: &MetricInstance) -> Result<HamiltonianPath> {
    inst.ensure_metric()?;
    let n = inst.n();
    if n <= 2 {
        return Ok(HamiltonianPath::from_order_unchecked(
            inst,
            (0..n).collect(),
        ));
    }

    let tree = minimum_spanning_tree(inst);
    let mut degree = vec![0usize; n];
    for &(u, v) in &tree {
        degree[u] += 1;
        degree[v] += 1;
    }
    let odd: Vec<usize> = (0..n).filter(|&v| degree[v] % 2 == 1).collect();
    let restricted = MetricInstance::from_fn(odd.len(), |a, b| inst.weight(odd[a], odd[b]));
    let matching = min_weight_matching_leave_two(&restricted)?;

    let mut multigraph = tree;
    multigraph.extend(matching.pairs.iter().map(|&(a, b)| (odd[a], odd[b])));
    let start = odd[matching.unmatched[0]];
    let trail = euler_trail(n, &multigraph, start);

    let mut seen = vec![false; n];
    let order: Vec<usize> = trail
        .into_iter()
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect();
    Ok(HamiltonianPath::from_order_unchecked(inst, order))
}

/// Prim's algorithm on the dense matrix; ties go to the smaller vertex id.
pub(crate) fn minimum_spanning_tree(inst: &MetricInstance) -> Vec<(usize, usize)> {
    let n = inst.n();
    let mut in_tree = vec![false; n];
    let mut key = vec![u32::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n == 0 {
        return edges;
    }
    key[0] = 0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by_key(|&v| (key[v], v))
            .unwrap();
        in_tree[u] = true;
        if parent[u] != usize::MAX {
            edges.push((parent[u], u));
        }
        for v in 0..n {
            if !in_tree[v] && inst.weight(u, v) < key[v] {
                key[v] = inst.weight(u, v);
                parent[v] = u;
            }
        }
    }
    edges
}

/// Hierholzer's algorithm. `edges` may contain parallel edges; `start` must be
/// an odd-degree vertex when any exist.
fn euler_trail(n: usize, edges: &[(usize, usize)], start: usize) -> Vec<usize> {
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        incident[u].push((v, id));
        incident[v].push((u, id));
    }
    // pop from the back, so reverse to walk smallest neighbors first
    for list in &mut incident {
        list.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut used = vec![false; edges.len()];
    let mut stack = vec![start];
    let mut trail = Vec::with_capacity(edges.len() + 1);
    while let Some(&top) = stack.last() {
        while incident[top].last().is_some_and(|&(_, id)| used[id]) {
            incident[top].pop();
        }
        match incident[top].pop() {
            Some((next, id)) => {
                used[id] = true;
                stack.push(next);
            }
            None => {
                trail.push(top);
                stack.pop();
            }
        }
    }
    trail.reverse();
    trail
}
