//! Hierarchical clustering through Max-Uncut Bisection: split the vertices
//! with a bisection solver, then cluster each half with Average-Linkage.

use crate::graph::{SimilarityGraph, VertexSet};
use crate::linkage::average_linkage;
use crate::mub::MubSolver;
use crate::tree::HCTree;
use crate::{Error, Result};

/// Parts smaller than this are handed straight to Average-Linkage.
const MIN_SPLIT_SIZE: usize = 4;

/// Root split from `solver`, Average-Linkage inside each side.
///
/// Graphs with fewer than four vertices are clustered by Average-Linkage
/// directly.
pub fn hc_via_mub<S: MubSolver + ?Sized>(g: &SimilarityGraph, solver: &S) -> Result<HCTree> {
    hc_via_mub_recursive(g, solver, 1)
}

/// Applies `solver` recursively down to `depth_limit` levels, then
/// Average-Linkage. Depth 0 is plain Average-Linkage and depth 1 is
/// [`hc_via_mub`].
pub fn hc_via_mub_recursive<S: MubSolver + ?Sized>(
    g: &SimilarityGraph,
    solver: &S,
    depth_limit: usize,
) -> Result<HCTree> {
    if g.n() < 2 {
        return Err(Error::TooSmall {
            what: "clustering pipeline",
            n: g.n(),
        });
    }
    split(g, &VertexSet::full(g.n()), solver, depth_limit)
}

fn split<S: MubSolver + ?Sized>(
    g: &SimilarityGraph,
    part: &VertexSet,
    solver: &S,
    depth: usize,
) -> Result<HCTree> {
    if depth == 0 || part.len() < MIN_SPLIT_SIZE {
        return average_linkage(g, Some(part));
    }
    let labels = part.as_slice();
    let sub = if part.len() == g.n() {
        g.clone()
    } else {
        g.induced(part)?
    };
    let halves = solver.solve(&sub)?;
    let to_global = |s: &VertexSet| VertexSet::new(s.iter().map(|&k| labels[k]));
    let left = split(g, &to_global(halves.left())?, solver, depth - 1)?;
    let right = split(g, &to_global(halves.right())?, solver, depth - 1)?;
    HCTree::join(&left, &right)
}
