//! Monotone grid classes, tree-width witnesses and hardness gadgets for
//! permutation pattern matching, with brute-force oracles to check them.

pub mod assembly;
pub mod classification;
pub mod error;
pub mod graph;
pub mod gridding;
pub mod instances;
pub mod perm;
pub mod reductions;
pub mod solvers;
pub mod witnesses;

pub use error::{Error, Result};
pub use graph::Graph;
pub use gridding::{CellEntry, Gridding, GriddingMatrix, Orientation};
pub use perm::{Permutation, Point, Symmetry};
