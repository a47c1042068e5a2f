//! Exact minimum-weight matchings that leave exactly two vertices uncovered.
//!
//! Small vertex sets go through a subset DP. Larger ones are solved as a
//! perfect matching after adding two dummy vertices joined to every real
//! vertex at zero cost; the dummies absorb the two uncovered vertices.

use mwmatching::{Matching, SENTINEL};

use crate::error::{Error, Result};
use crate::reduction::MetricInstance;

/// Vertex sets up to this size are matched by the subset DP.
pub const SUBSET_DP_LIMIT: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearPerfectMatching {
    /// Matched pairs `(a, b)` with `a < b`, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// The two vertices left uncovered, smaller first.
    pub unmatched: Vec<usize>,
    pub weight: u64,
}

/// Minimum-weight matching on the complete graph `weights` covering all but
/// exactly two of its vertices. The vertex count must be even and at least 2.
pub fn min_weight_matching_leave_two(weights: &MetricInstance) -> Result<NearPerfectMatching> {
    if weights.n() <= SUBSET_DP_LIMIT {
        matching_by_subset_dp(weights)
    } else {
        matching_by_blossom(weights)
    }
}

fn check_size(weights: &MetricInstance) -> Result<()> {
    let m = weights.n();
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidMatrix(format!(
            "matching needs an even vertex count of at least 2, got {m}"
        )));
    }
    Ok(())
}

pub fn matching_by_subset_dp(weights: &MetricInstance) -> Result<NearPerfectMatching> {
    check_size(weights)?;
    let m = weights.n();
    if m > SUBSET_DP_LIMIT + 4 {
        return Err(Error::InstanceTooLarge {
            n: m,
            cap: SUBSET_DP_LIMIT + 4,
        });
    }
    const INF: u64 = u64::MAX;
    // best[mask][skips]: cheapest way to settle the vertices of `mask`,
    // leaving exactly `skips` of them uncovered
    let states = 1usize << m;
    let mut best = vec![[INF; 3]; states];
    best[0][0] = 0;
    for mask in 1..states {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << low);
        let mut entry = [INF; 3];
        for (skips, slot) in entry.iter_mut().enumerate() {
            let mut value = INF;
            if skips > 0 && best[rest][skips - 1] != INF {
                value = best[rest][skips - 1];
            }
            let mut bits = rest;
            while bits != 0 {
                let other = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let sub = best[rest & !(1 << other)][skips];
                if sub != INF {
                    value = value.min(sub + u64::from(weights.weight(low, other)));
                }
            }
            *slot = value;
        }
        best[mask] = entry;
    }

    let full = states - 1;
    let weight = best[full][2];
    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    let (mut mask, mut skips) = (full, 2usize);
    while mask != 0 {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << low);
        let target = best[mask][skips];
        let paired = (0..m).filter(|&o| rest >> o & 1 == 1).find(|&o| {
            let sub = best[rest & !(1 << o)][skips];
            sub != INF && sub + u64::from(weights.weight(low, o)) == target
        });
        match paired {
            Some(other) => {
                pairs.push((low, other));
                mask = rest & !(1 << other);
            }
            None => {
                debug_assert!(skips > 0 && best[rest][skips - 1] == target);
                unmatched.push(low);
                skips -= 1;
                mask = rest;
            }
        }
    }
    pairs.sort_unstable();
    Ok(NearPerfectMatching {
        pairs,
        unmatched,
        weight,
    })
}

pub fn matching_by_blossom(weights: &MetricInstance) -> Result<NearPerfectMatching> {
    check_size(weights)?;
    let m = weights.n();
    if m == 2 {
        return Ok(NearPerfectMatching {
            pairs: Vec::new(),
            unmatched: vec![0, 1],
            weight: 0,
        });
    }
    // Maximize sum of (ceiling - w) over a maximum-cardinality matching; with
    // every edge weight positive that is a perfect matching of minimum cost.
    let ceiling = i64::from(weights.max_weight()) + 1;
    if ceiling * (m as i64 + 2) * 4 > i64::from(i32::MAX) {
        return Err(Error::WeightOverflow);
    }
    let ceiling = ceiling as i32;
    let (dummy_a, dummy_b) = (m, m + 1);
    let mut edges = Vec::with_capacity(m * (m + 3) / 2);
    for u in 0..m {
        for v in (u + 1)..m {
            edges.push((u, v, ceiling - weights.weight(u, v) as i32));
        }
        edges.push((u, dummy_a, ceiling));
        edges.push((u, dummy_b, ceiling));
    }
    let mates = Matching::new(edges).max_cardinality().solve();

    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    for (u, &mate) in mates.iter().enumerate().take(m) {
        assert!(mate != SENTINEL, "maximum-cardinality matching is perfect");
        if mate >= m {
            unmatched.push(u);
        } else if u < mate {
            pairs.push((u, mate));
        }
    }
    let weight = pairs
        .iter()
        .map(|&(a, b)| u64::from(weights.weight(a, b)))
        .sum();
    Ok(NearPerfectMatching {
        pairs,
        unmatched,
        weight,
    })
}
