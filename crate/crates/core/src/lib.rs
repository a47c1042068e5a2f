//! Minimum-span L(p_1, ..., p_k)-labelings of graphs with diameter at most
//! `k`, computed through a reduction to metric path TSP.
//!
//! The pipeline is: build the weighted complete graph whose pair weights are
//! `p_{dist(u, v)}` ([`reduction`]), solve free-endpoint path TSP on it
//! exactly, approximately or heuristically ([`tsp`]), and read labels off the
//! path as prefix sums. [`labeling`] holds the verifier and two exact oracles
//! that never go through the reduction, plus [`labeling::solve`] itself.
//!
//! With the default `parallel` feature the exponential kernels (Held-Karp
//! layers, the permutation oracle, multistart local search, all-pairs BFS)
//! run on rayon. Without it everything runs on the calling thread; the
//! `*_sequential` variants are always available.

pub mod error;
pub mod generate;
pub mod graph;
pub mod labeling;
pub mod pathcover;
pub mod power;
pub mod reduction;
pub mod tsp;
pub mod tsplib;

pub use error::{Error, Result};
pub use graph::{DistanceMatrix, Graph, UNREACHABLE};
pub use labeling::{
    oracle_span_branch_bound, oracle_span_permutations, pmax_approx_labeling, solve, solve_with,
    verify_labeling, LabelingDocument, Method, Solution, SolveOptions, SolveReport, Violation,
};
pub use pathcover::{min_path_cover, span_via_path_cover, PathCover};
pub use power::{l1_labeling_via_coloring, neighborhood_diversity};
pub use reduction::{
    build_instance, check_preconditions, greedy_label_for_order, label_from_path, HamiltonianPath,
    Labeling, MetricInstance, PVector, Preconditions,
};
pub use tsplib::{export_tsplib, import_tour, parse_tsplib};
