//! Hierarchical clustering under the Moseley-Wang similarity objective.
//!
//! The objective rewards trees that keep heavy pairs apart from the root: a
//! pair `(i, j)` with similarity `w_ij` contributes `w_ij * (n - |T(i,j)|)`,
//! where `|T(i,j)|` is the number of leaves under the least common ancestor
//! of `i` and `j`. Its complement is Dasgupta's cost `w_ij * |T(i,j)|`.
//!
//! The crate provides:
//!
//! - [`graph`] holds the similarity graph and weight aggregates,
//! - [`tree`] holds binary hierarchies, both objectives and a text format,
//! - [`linkage`] holds Average-Linkage,
//! - [`mub`] holds Max-Uncut Bisection solvers (exact and local search),
//! - [`pipeline`] holds bisection at the root followed by Average-Linkage,
//! - [`oracle`] holds exact optima for small instances,
//! - [`analysis`] holds the optimal-tree decomposition, its bounds and the
//!   randomized balanced cut built from it,
//! - [`generate`] holds seeded instance generators.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
mod error;
pub mod generate;
pub mod graph;
pub mod linkage;
pub mod mub;
pub mod oracle;
pub mod pipeline;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{SimilarityGraph, VertexSet};
pub use tree::HCTree;

