//! Diameter-2 L(p,q)-labeling through minimum path covers.
//!
//! On a diameter-2 graph every weight of the reduced instance is `p` (edges)
//! or `q` (non-edges), so a path of `n - 1` steps that uses `b` non-edges has
//! length `(n - 1) p + (q - p) b`. For `p <= q` the optimum minimizes `b`,
//! which is one less than the minimum number of vertex-disjoint paths of `G`
//! covering `V`. For `p > q` the roles swap and the cover is taken in the
//! complement.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reduction::{MetricInstance, PVector};
use crate::tsp::{held_karp_path_capped, DEFAULT_HELD_KARP_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCover {
    /// Vertex-disjoint paths of the graph covering every vertex.
    pub paths: Vec<Vec<usize>>,
}

impl PathCover {
    pub fn size(&self) -> usize {
        self.paths.len()
    }
}

/// Minimum partition of `V` into paths of `g`.
///
/// Solved exactly as path TSP on the complete graph weighting edges of `g`
/// with 0 and non-edges with 1: an optimal order of length `b` splits at its
/// `b` unit steps into `b + 1` paths.
pub fn min_path_cover(g: &Graph) -> Result<PathCover> {
    let n = g.n();
    if n == 0 {
        return Ok(PathCover { paths: Vec::new() });
    }
    let inst = MetricInstance::from_fn(n, |u, v| u32::from(!g.has_edge(u, v)));
    let path = held_karp_path_capped(&inst, DEFAULT_HELD_KARP_CAP)?;

    let mut paths = vec![vec![path.order[0]]];
    for pair in path.order.windows(2) {
        if inst.weight(pair[0], pair[1]) == 1 {
            paths.push(vec![pair[1]]);
        } else {
            paths.last_mut().unwrap().push(pair[1]);
        }
    }
    debug_assert_eq!(paths.len() as u64, path.length + 1);
    Ok(PathCover { paths })
}

/// `lambda_{(p,q)}(g)` for a connected graph of diameter at most 2 with
/// `max(p, q) <= 2 min(p, q)`.
pub fn span_via_path_cover(g: &Graph, p: u32, q: u32) -> Result<u64> {
    let pq = PVector::new(vec![p, q])?;
    let diameter = g
        .all_pairs_distances()
        .diameter()
        .ok_or(Error::Disconnected)?;
    if diameter > 2 {
        return Err(Error::DiameterExceedsK { diameter, k: 2 });
    }
    if !pq.ratio_ok() {
        return Err(Error::RatioViolated {
            p_max: pq.p_max(),
            p_min: pq.p_min(),
        });
    }
    let steps = g.n().saturating_sub(1) as u64;
    let (p, q) = (u64::from(p), u64::from(q));
    let span = if p <= q {
        let cover = min_path_cover(g)?;
        steps * p + (q - p) * (cover.size() as u64 - 1)
    } else {
        let cover = min_path_cover(&g.complement())?;
        steps * q + (p - q) * (cover.size() as u64 - 1)
    };
    Ok(span)
}
