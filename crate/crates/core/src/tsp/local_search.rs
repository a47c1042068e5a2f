//! Construction and improvement heuristics for free-endpoint path TSP.

use crate::reduction::{HamiltonianPath, MetricInstance};

/// Longest segment Or-opt will relocate.
const OR_OPT_MAX_SEGMENT: usize = 3;

/// Greedy path from `start`, always stepping to the nearest unvisited vertex.
/// Ties go to the smallest id.
pub fn nearest_neighbor_path(inst: &MetricInstance, start: usize) -> HamiltonianPath {
    let n = inst.n();
    assert!(start < n, "start vertex {start} out of range 0..{n}");
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = start;
    visited[start] = true;
    order.push(start);
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (inst.weight(current, v), v))
            .unwrap();
        visited[next] = true;
        order.push(next);
        current = next;
    }
    HamiltonianPath::from_order_unchecked(inst, order)
}

/// First-improvement local search with 2-opt segment reversals and Or-opt
/// segment moves. Applies at most `budget` improving moves; each scan runs
/// over positions in ascending order and 2-opt is tried before Or-opt.
pub fn two_opt_improve(
    inst: &MetricInstance,
    path: &HamiltonianPath,
    budget: usize,
) -> HamiltonianPath {
    let mut order = path.order.clone();
    let mut moves = 0;
    while moves < budget {
        if apply_first_two_opt(inst, &mut order) || apply_first_or_opt(inst, &mut order) {
            moves += 1;
        } else {
            break;
        }
    }
    let improved = HamiltonianPath::from_order_unchecked(inst, order);
    debug_assert!(improved.length <= path.length);
    improved
}

#[inline]
fn link(inst: &MetricInstance, a: Option<usize>, b: Option<usize>) -> i64 {
    match (a, b) {
        (Some(a), Some(b)) => i64::from(inst.weight(a, b)),
        _ => 0,
    }
}

/// Reversing `order[i..=j]` only changes the two boundary edges.
fn apply_first_two_opt(inst: &MetricInstance, order: &mut [usize]) -> bool {
    let n = order.len();
    for i in 0..n {
        let before = i.checked_sub(1).map(|x| order[x]);
        for j in (i + 1)..n {
            let after = order.get(j + 1).copied();
            let (first, last) = (Some(order[i]), Some(order[j]));
            let delta = link(inst, before, last) + link(inst, first, after)
                - link(inst, before, first)
                - link(inst, last, after);
            if delta < 0 {
                order[i..=j].reverse();
                return true;
            }
        }
    }
    false
}

/// Moves `order[i..i + len]` to another gap of the remaining sequence,
/// optionally reversed.
fn apply_first_or_opt(inst: &MetricInstance, order: &mut Vec<usize>) -> bool {
    let n = order.len();
    for i in 0..n {
        for len in 1..=OR_OPT_MAX_SEGMENT.min(n - i) {
            if len == n {
                continue;
            }
            let seg_first = order[i];
            let seg_last = order[i + len - 1];
            let before = i.checked_sub(1).map(|x| order[x]);
            let after = order.get(i + len).copied();
            let removal = link(inst, before, after)
                - link(inst, before, Some(seg_first))
                - link(inst, Some(seg_last), after);

            let rest: Vec<usize> = order[..i]
                .iter()
                .chain(&order[i + len..])
                .copied()
                .collect();
            for gap in 0..=rest.len() {
                let left = gap.checked_sub(1).map(|x| rest[x]);
                let right = rest.get(gap).copied();
                for reversed in [false, true] {
                    if gap == i && !reversed {
                        continue;
                    }
                    let (head, tail) = if reversed {
                        (seg_last, seg_first)
                    } else {
                        (seg_first, seg_last)
                    };
                    let insertion = link(inst, left, Some(head)) + link(inst, Some(tail), right)
                        - link(inst, left, right);
                    if removal + insertion < 0 {
                        let mut segment = order[i..i + len].to_vec();
                        if reversed {
                            segment.reverse();
                        }
                        let mut next = rest[..gap].to_vec();
                        next.extend_from_slice(&segment);
                        next.extend_from_slice(&rest[gap..]);
                        *order = next;
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Best two-opt-improved nearest-neighbor path over every start vertex.
pub fn multistart_local_search(inst: &MetricInstance, budget: usize) -> HamiltonianPath {
    let n = inst.n();
    if n == 0 {
        return HamiltonianPath {
            order: Vec::new(),
            length: 0,
        };
    }
    let improve = |start: usize| two_opt_improve(inst, &nearest_neighbor_path(inst, start), budget);
    #[cfg(feature = "parallel")]
    let candidates: Vec<HamiltonianPath> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(improve).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let candidates: Vec<HamiltonianPath> = (0..n).map(improve).collect();
    candidates
        .into_iter()
        .min_by(|a, b| a.length.cmp(&b.length).then_with(|| a.order.cmp(&b.order)))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsp::held_karp_path;
    use rand::{Rng, SeedableRng};

    fn p3_instance() -> MetricInstance {
        MetricInstance::from_matrix(3, vec![0, 2, 1, 2, 0, 2, 1, 2, 0]).unwrap()
    }

    #[test]
    fn nearest_neighbor_tie_breaks_by_id() {
        let path = nearest_neighbor_path(&p3_instance(), 1);
        assert_eq!((path.order, path.length), (vec![1, 0, 2], 3));
        let k3 = MetricInstance::from_fn(3, |_, _| 2);
        let path = nearest_neighbor_path(&k3, 0);
        assert_eq!((path.order, path.length), (vec![0, 1, 2], 4));
        let one = MetricInstance::from_fn(1, |_, _| 0);
        assert_eq!(nearest_neighbor_path(&one, 0).order, vec![0]);
    }

    #[test]
    fn improves_p3() {
        let h = p3_instance();
        let start = HamiltonianPath::new(&h, vec![0, 1, 2]).unwrap();
        assert_eq!(start.length, 4);
        let better = two_opt_improve(&h, &start, 100);
        assert_eq!(better.length, 3);
    }

    #[test]
    fn local_optimum_is_unchanged() {
        let h = p3_instance();
        let optimal = held_karp_path(&h).unwrap();
        assert_eq!(two_opt_improve(&h, &optimal, 100), optimal);
    }

    #[test]
    fn zero_budget_is_identity() {
        let h = p3_instance();
        let start = HamiltonianPath::new(&h, vec![0, 1, 2]).unwrap();
        assert_eq!(two_opt_improve(&h, &start, 0), start);
    }

    #[test]
    fn or_opt_escapes_a_two_opt_optimum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut found = false;
        for _ in 0..500 {
            let n = 7;
            let inst = MetricInstance::from_fn(n, |_, _| rng.random_range(1..=20));
            let mut order: Vec<usize> = (0..n).collect();
            while apply_first_two_opt(&inst, &mut order) {}
            let before = inst.path_length(&order);
            if apply_first_or_opt(&inst, &mut order) {
                assert!(inst.path_length(&order) < before);
                assert!(crate::reduction::is_permutation(&order, n));
                found = true;
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn never_worse_and_never_below_optimum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.random_range(1..=10);
            let inst = MetricInstance::from_fn(n, |_, _| rng.random_range(1..=15));
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            let start = HamiltonianPath::new(&inst, order).unwrap();
            let improved = two_opt_improve(&inst, &start, 1_000);
            let exact = held_karp_path(&inst).unwrap();
            assert!(improved.length <= start.length);
            assert!(improved.length >= exact.length);
            assert_eq!(improved.length, inst.path_length(&improved.order));
            assert!(crate::reduction::is_permutation(&improved.order, n));
            assert!(multistart_local_search(&inst, 1_000).length >= exact.length);
        }
    }
}
