//! Exact solvers and verification oracles.

pub mod colored;
pub mod graph_oracles;
pub mod ppm;
pub mod td_count;
pub mod treewidth;

pub use colored::{solve_colored_via_counting, BacktrackCounter, OccurrenceCounter};
pub use graph_oracles::{brute_clique, brute_psi};
pub use ppm::{
    find_anchored_embedding, find_colored_embedding, find_embedding, solve_anchored_brute, solve_colored_brute,
    Limits,
};
pub use td_count::{count_ppm_td, DecompositionCounter};
pub use treewidth::{exact_treewidth, heuristic_treewidth, TreeDecomposition, Treewidth};
