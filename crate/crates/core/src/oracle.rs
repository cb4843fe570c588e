//! Exact optima of the Moseley-Wang objective on small graphs.
//!
//! [`opt_dp`] minimizes the complementary Dasgupta cost with a subset
//! dynamic program over bitmasks; [`opt_exhaustive`] enumerates every binary
//! tree and is kept as an independent cross-check.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::SimilarityGraph;
use crate::tree::{HCTree, NodeId, TreeBuilder};
use crate::{Error, Result};

/// Default vertex limit of [`opt_dp`].
pub const DP_LIMIT: usize = 16;

/// Vertex limit of [`opt_exhaustive`].
pub const EXHAUSTIVE_LIMIT: usize = 8;

/// An optimal value and a tree attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub value: f64,
    pub tree: HCTree,
}

/// Exact optimum with the default limit of 16 vertices.
pub fn opt_dp(g: &SimilarityGraph) -> Result<Optimum> {
    opt_dp_with_limit(g, DP_LIMIT)
}

/// Exact optimum for `2 <= n <= limit` (`limit` is capped at 24).
///
/// The minimum Dasgupta cost over subsets obeys
/// `F(S) = min over splits (S1, S2) of w(S1, S2) |S| + F(S1) + F(S2)`, and
/// the optimum is `n W - F(V)`. Among optimal splits the one with the
/// smallest first-child bitmask is kept, the first child being the side that
/// holds the smallest vertex.
pub fn opt_dp_with_limit(g: &SimilarityGraph, limit: usize) -> Result<Optimum> {
    let n = g.n();
    let limit = limit.min(24);
    if n > limit {
        return Err(Error::TooLarge {
            what: "exact optimum",
            n,
            limit,
        });
    }
    if n < 2 {
        return Err(Error::TooSmall {
            what: "exact optimum",
            n,
        });
    }
    let full = (1usize << n) - 1;
    let within = within_table(g);
    let mut cost = vec![0.0f64; full + 1];
    let mut choice = vec![0u32; full + 1];
    for mask in 1..=full {
        if mask & (mask - 1) == 0 {
            continue;
        }
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let size = mask.count_ones() as f64;
        let mut best = f64::INFINITY;
        let mut best_first = 0;
        // proper submasks of `rest` in decreasing order, so `<=` settles ties
        // on the smallest first child
        let mut sub = rest;
        loop {
            sub = sub.wrapping_sub(1) & rest;
            let first = low | sub;
            let second = mask ^ first;
            let cut = within[mask] - within[first] - within[second];
            let c = cut * size + cost[first] + cost[second];
            if c <= best {
                best = c;
                best_first = first;
            }
            if sub == 0 {
                break;
            }
        }
        cost[mask] = best;
        choice[mask] = best_first as u32;
    }

    let mut b = TreeBuilder::with_capacity(n);
    // post-order rebuild from the recorded choices
    let mut stack: Vec<(usize, bool)> = vec![(full, false)];
    let mut built: Vec<NodeId> = Vec::new();
    while let Some((mask, expanded)) = stack.pop() {
        if mask & (mask - 1) == 0 {
            built.push(b.leaf(mask.trailing_zeros() as usize));
        } else if !expanded {
            let first = choice[mask] as usize;
            stack.push((mask, true));
            stack.push((mask ^ first, false));
            stack.push((first, false));
        } else {
            let second = built.pop().expect("second child");
            let first = built.pop().expect("first child");
            built.push(b.join(first, second));
        }
    }
    let tree = b.finish(built[0])?;
    let value = (n as f64 * g.total_weight() - cost[full]).max(0.0);
    Ok(Optimum { value, tree })
}

/// `w(S)` for every bitmask `S`, built in `O(2^n n)`.
fn within_table(g: &SimilarityGraph) -> Vec<f64> {
    let n = g.n();
    let mut table = vec![0.0; 1 << n];
    for mask in 1usize..(1 << n) {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut add = 0.0;
        let mut bits = rest;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            add += g.weight(v, u);
            bits &= bits - 1;
        }
        table[mask] = table[rest] + add;
    }
    table
}

#[derive(Clone)]
enum Shape {
    Leaf(usize),
    Join(Box<Shape>, Box<Shape>),
}

impl Shape {
    /// Every way of attaching leaf `v` to an edge of this tree, including
    /// above its root.
    fn insertions(&self, v: usize) -> Vec<Shape> {
        let mut out = vec![Shape::Join(Box::new(self.clone()), Box::new(Shape::Leaf(v)))];
        if let Shape::Join(l, r) = self {
            for nl in l.insertions(v) {
                out.push(Shape::Join(Box::new(nl), r.clone()));
            }
            for nr in r.insertions(v) {
                out.push(Shape::Join(l.clone(), Box::new(nr)));
            }
        }
        out
    }

    fn build(&self, b: &mut TreeBuilder) -> NodeId {
        match self {
            Shape::Leaf(v) => b.leaf(*v),
            Shape::Join(l, r) => {
                let l = l.build(b);
                let r = r.build(b);
                b.join(l, r)
            }
        }
    }
}

/// All `(2n-3)!!` unordered binary trees with leaves `0..n`.
pub fn all_trees(n: usize) -> Vec<HCTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut shapes = vec![Shape::Leaf(0)];
    for v in 1..n {
        shapes = shapes.iter().flat_map(|s| s.insertions(v)).collect();
    }
    shapes
        .iter()
        .map(|s| {
            let mut b = TreeBuilder::new();
            let root = s.build(&mut b);
            b.finish(root).expect("distinct leaves")
        })
        .collect()
}

/// Maximum objective over every binary tree, for `2 <= n <= 8`.
pub fn opt_exhaustive(g: &SimilarityGraph) -> Result<f64> {
    let n = g.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            what: "exhaustive optimum",
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    if n < 2 {
        return Err(Error::TooSmall {
            what: "exhaustive optimum",
            n,
        });
    }
    let mut best = f64::NEG_INFINITY;
    for t in all_trees(n) {
        best = best.max(t.mw_objective(g)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn path4() -> SimilarityGraph {
        SimilarityGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap()
    }

    #[test]
    fn tree_counts_are_double_factorials() {
        let counts: Vec<usize> = (1..=7).map(|n| all_trees(n).len()).collect();
        assert_eq!(counts, [1, 1, 3, 15, 105, 945, 10395]);
        let mut texts: Vec<_> = all_trees(5).iter().map(|t| t.to_string()).collect();
        texts.sort();
        texts.dedup();
        assert_eq!(texts.len(), 105);
    }

    #[test]
    fn dp_examples() {
        let k3 = SimilarityGraph::from_fn(3, |_, _| 1.0).unwrap();
        assert_eq!(opt_dp(&k3).unwrap().value, 1.0);
        let opt = opt_dp(&path4()).unwrap();
        assert_eq!(opt.value, 4.0);
        assert_eq!(opt.tree.to_string(), "((0,1),(2,3))");
        for n in 2..=10 {
            let g = SimilarityGraph::empty(n).unwrap();
            assert_eq!(opt_dp(&g).unwrap().value, 0.0);
        }
    }

    #[test]
    fn exhaustive_examples() {
        let g2 = SimilarityGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(opt_exhaustive(&g2).unwrap(), 0.0);
        let k3 = SimilarityGraph::from_fn(3, |_, _| 1.0).unwrap();
        assert_eq!(opt_exhaustive(&k3).unwrap(), 1.0);
        assert_eq!(opt_exhaustive(&path4()).unwrap(), 4.0);
    }

    #[test]
    fn limits() {
        let g = SimilarityGraph::empty(17).unwrap();
        assert!(matches!(opt_dp(&g), Err(Error::TooLarge { n: 17, limit: 16, .. })));
        let g = SimilarityGraph::empty(9).unwrap();
        assert!(matches!(opt_exhaustive(&g), Err(Error::TooLarge { .. })));
        let g = SimilarityGraph::empty(1).unwrap();
        assert!(matches!(opt_dp(&g), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn dp_tree_attains_value() {
        let g = SimilarityGraph::from_fn(9, |i, j| ((i * 13 + j * 7) % 10) as f64 / 10.0).unwrap();
        let opt = opt_dp(&g).unwrap();
        let direct = opt.tree.mw_objective(&g).unwrap();
        assert!((direct - opt.value).abs() <= 1e-9 * opt.value);
    }
}
