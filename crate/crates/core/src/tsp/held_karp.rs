//! Exact free-endpoint path TSP by dynamic programming over vertex subsets.
//!
//! `cost[S][j]` is the length of the shortest path that starts at `j` and
//! visits exactly the vertices of `S` (with `j` in `S`). Storing the suffix
//! cost rather than the prefix cost lets the reconstruction walk forward from
//! the first vertex, always taking the smallest id that stays on an optimal
//! path, which yields the lexicographically smallest optimal order.

use crate::error::{Error, Result};
use crate::reduction::{HamiltonianPath, MetricInstance};

/// Largest instance the DP accepts by default. The table holds `2^n * n`
/// 32-bit entries, so 24 vertices need about 1.6 GB.
pub const DEFAULT_HELD_KARP_CAP: usize = 24;

const UNSET: u32 = u32::MAX;

/// Minimum-length Hamiltonian path with free endpoints.
pub fn held_karp_path(inst: &MetricInstance) -> Result<HamiltonianPath> {
    held_karp_path_capped(inst, DEFAULT_HELD_KARP_CAP)
}

pub fn held_karp_path_capped(inst: &MetricInstance, cap: usize) -> Result<HamiltonianPath> {
    #[cfg(feature = "parallel")]
    {
        held_karp_path_parallel(inst, cap)
    }
    #[cfg(not(feature = "parallel"))]
    {
        held_karp_path_sequential(inst, cap)
    }
}

fn check_size(inst: &MetricInstance, cap: usize) -> Result<()> {
    let n = inst.n();
    if n > cap || n >= usize::BITS as usize - 1 {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    let longest = u64::from(inst.max_weight()) * n.saturating_sub(1) as u64;
    if longest >= u64::from(UNSET) {
        return Err(Error::WeightOverflow);
    }
    Ok(())
}

#[inline]
fn relax(inst: &MetricInstance, cost: &[u32], mask: usize, start: usize) -> u32 {
    let n = inst.n();
    let rest = mask & !(1 << start);
    if rest == 0 {
        return 0;
    }
    let row = inst.row(start);
    let mut best = UNSET;
    let mut bits = rest;
    while bits != 0 {
        let next = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let candidate = row[next] + cost[rest * n + next];
        if candidate < best {
            best = candidate;
        }
    }
    best
}

/// Single-threaded DP; masks are processed in increasing numeric order, which
/// visits every proper subset before its supersets.
pub fn held_karp_path_sequential(inst: &MetricInstance, cap: usize) -> Result<HamiltonianPath> {
    check_size(inst, cap)?;
    let n = inst.n();
    if n == 0 {
        return Ok(HamiltonianPath {
            order: Vec::new(),
            length: 0,
        });
    }
    let mut cost = vec![UNSET; (1usize << n) * n];
    for mask in 1usize..(1 << n) {
        let mut bits = mask;
        while bits != 0 {
            let start = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            cost[mask * n + start] = relax(inst, &cost, mask, start);
        }
    }
    Ok(reconstruct(inst, &cost))
}

/// Layered DP: all subsets of one size depend only on the previous size, so
/// each layer is evaluated in parallel and then written back.
#[cfg(feature = "parallel")]
pub fn held_karp_path_parallel(inst: &MetricInstance, cap: usize) -> Result<HamiltonianPath> {
    use rayon::prelude::*;

    check_size(inst, cap)?;
    let n = inst.n();
    if n == 0 {
        return Ok(HamiltonianPath {
            order: Vec::new(),
            length: 0,
        });
    }
    let mut cost = vec![UNSET; (1usize << n) * n];
    for v in 0..n {
        cost[(1 << v) * n + v] = 0;
    }
    for size in 2..=n {
        let masks = subsets_of_size(n, size);
        let values: Vec<u32> = masks
            .par_iter()
            .flat_map_iter(|&mask| {
                let cost = &cost;
                (0..n).map(move |start| {
                    if mask >> start & 1 == 1 {
                        relax(inst, cost, mask, start)
                    } else {
                        UNSET
                    }
                })
            })
            .collect();
        for (&mask, chunk) in masks.iter().zip(values.chunks_exact(n)) {
            cost[mask * n..(mask + 1) * n].copy_from_slice(chunk);
        }
    }
    Ok(reconstruct(inst, &cost))
}

/// All `n`-bit masks with exactly `size` bits set, in increasing order.
#[cfg(feature = "parallel")]
fn subsets_of_size(n: usize, size: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let limit = 1usize << n;
    let mut mask = (1usize << size) - 1;
    while mask < limit {
        out.push(mask);
        // Gosper's hack: next integer with the same popcount
        let low = mask & mask.wrapping_neg();
        let ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
    out
}

fn reconstruct(inst: &MetricInstance, cost: &[u32]) -> HamiltonianPath {
    let n = inst.n();
    let full = (1usize << n) - 1;
    let mut current = (0..n)
        .min_by_key(|&v| (cost[full * n + v], v))
        .expect("n >= 1");
    let length = u64::from(cost[full * n + current]);
    let mut mask = full;
    let mut order = Vec::with_capacity(n);
    order.push(current);
    while mask.count_ones() > 1 {
        let target = cost[mask * n + current];
        let rest = mask & !(1 << current);
        let next = (0..n)
            .filter(|&v| rest >> v & 1 == 1)
            .find(|&v| inst.weight(current, v) + cost[rest * n + v] == target)
            .expect("optimal successor exists");
        order.push(next);
        current = next;
        mask = rest;
    }
    HamiltonianPath { order, length }
}
