//! Average-Linkage agglomerative clustering.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{SimilarityGraph, VertexSet};
use crate::tree::{HCTree, NodeId, TreeBuilder};
use crate::{Error, Result};

/// Builds a tree by repeatedly merging the two clusters with the largest
/// average similarity `w(A, B) / (|A| |B|)`.
///
/// With `restriction`, only those vertices are clustered and the tree's leaves
/// are their original labels. Ties go to the pair whose first cluster has the
/// smallest minimum leaf, then to the smallest minimum leaf of the second
/// cluster, which makes the output a pure function of the graph.
pub fn average_linkage(g: &SimilarityGraph, restriction: Option<&VertexSet>) -> Result<HCTree> {
    let full;
    let members = match restriction {
        Some(s) => s,
        None => {
            full = VertexSet::full(g.n());
            &full
        }
    };
    if members.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&v) = members.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let vs = members.as_slice();
    let k = vs.len();

    // cross[a * k + b] = w(cluster a, cluster b); slots keep the index of the
    // cluster's smallest vertex, so `active` stays ordered by minimum leaf.
    let mut cross = vec![0.0; k * k];
    for (a, &u) in vs.iter().enumerate() {
        for (b, &v) in vs.iter().enumerate().skip(a + 1) {
            let w = g.weight(u, v);
            cross[a * k + b] = w;
            cross[b * k + a] = w;
        }
    }
    let mut size = vec![1usize; k];
    let mut builder = TreeBuilder::with_capacity(k);
    let mut node: Vec<NodeId> = vs.iter().map(|&v| builder.leaf(v)).collect();
    let mut active: Vec<usize> = (0..k).collect();

    while active.len() > 1 {
        let mut best = (0, 1);
        let mut best_avg = f64::NEG_INFINITY;
        for (x, &a) in active.iter().enumerate() {
            for (y, &b) in active.iter().enumerate().skip(x + 1) {
                let avg = cross[a * k + b] / (size[a] * size[b]) as f64;
                if avg > best_avg {
                    best_avg = avg;
                    best = (x, y);
                }
            }
        }
        let (x, y) = best;
        let (a, b) = (active[x], active[y]);
        for &c in &active {
            if c != a && c != b {
                let w = cross[a * k + c] + cross[b * k + c];
                cross[a * k + c] = w;
                cross[c * k + a] = w;
            }
        }
        size[a] += size[b];
        node[a] = builder.join(node[a], node[b]);
        active.remove(y);
    }
    builder.finish(node[active[0]])
}
