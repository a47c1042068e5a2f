//! Solvers for free-endpoint path TSP on a [`MetricInstance`](crate::reduction::MetricInstance).

mod christofides;
mod held_karp;
mod local_search;
pub mod matching;

pub use christofides::christofides_path;
#[cfg(feature = "parallel")]
pub use held_karp::held_karp_path_parallel;
pub use held_karp::{
    held_karp_path, held_karp_path_capped, held_karp_path_sequential, DEFAULT_HELD_KARP_CAP,
};
pub use local_search::{multistart_local_search, nearest_neighbor_path, two_opt_improve};
pub use matching::{min_weight_matching_leave_two, NearPerfectMatching};
