//! Binary hierarchies over a set of points and their objective values.
//!
//! Trees are stored in an arena. Leaves carry vertex labels, internal nodes
//! carry exactly two children and a cached leaf count. The text form nests
//! parentheses with decimal leaf labels, e.g. `((0,1),(2,3))`; the printed
//! form is canonical, with each node's children ordered by smallest leaf.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{SimilarityGraph, VertexSet};
use crate::{Error, Result};

/// Index of a node inside an [`HCTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Leaf(usize),
    Internal {
        left: NodeId,
        right: NodeId,
        /// Number of leaves below this node.
        size: usize,
        /// Smallest leaf label below this node.
        min_leaf: usize,
    },
}

impl Node {
    pub fn size(&self) -> usize {
        match *self {
            Node::Leaf(_) => 1,
            Node::Internal { size, .. } => size,
        }
    }

    pub fn min_leaf(&self) -> usize {
        match *self {
            Node::Leaf(v) => v,
            Node::Internal { min_leaf, .. } => min_leaf,
        }
    }
}

/// Arena builder used by the clustering algorithms.
#[derive(Debug, Clone, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(leaves: usize) -> Self {
        TreeBuilder {
            nodes: Vec::with_capacity(2 * leaves),
        }
    }

    pub fn leaf(&mut self, v: usize) -> NodeId {
        self.nodes.push(Node::Leaf(v));
        NodeId(self.nodes.len() - 1)
    }

    /// Joins two existing nodes under a new parent, `left` first.
    pub fn join(&mut self, left: NodeId, right: NodeId) -> NodeId {
        let (l, r) = (self.nodes[left.0], self.nodes[right.0]);
        self.nodes.push(Node::Internal {
            left,
            right,
            size: l.size() + r.size(),
            min_leaf: l.min_leaf().min(r.min_leaf()),
        });
        NodeId(self.nodes.len() - 1)
    }

    /// Copies a whole tree into this arena and returns its new root.
    pub fn graft(&mut self, tree: &HCTree) -> NodeId {
        let offset = self.nodes.len();
        self.nodes.extend(tree.nodes.iter().map(|node| match *node {
            Node::Leaf(v) => Node::Leaf(v),
            Node::Internal {
                left,
                right,
                size,
                min_leaf,
            } => Node::Internal {
                left: NodeId(left.0 + offset),
                right: NodeId(right.0 + offset),
                size,
                min_leaf,
            },
        }));
        NodeId(tree.root.0 + offset)
    }

    /// Finalizes the tree rooted at `root`.
    ///
    /// Nodes not reachable from `root` are dropped. Fails if a leaf label
    /// repeats or a node is reachable twice.
    pub fn finish(self, root: NodeId) -> Result<HCTree> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut seen_leaves = Vec::new();
        // post-order copy so children precede parents
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            match self.nodes[id.0] {
                Node::Leaf(v) => {
                    if remap[id.0] != usize::MAX {
                        return Err(Error::DuplicateVertex(v));
                    }
                    seen_leaves.push(v);
                    remap[id.0] = nodes.len();
                    nodes.push(Node::Leaf(v));
                }
                Node::Internal {
                    left,
                    right,
                    size,
                    min_leaf,
                } => {
                    if !expanded {
                        if remap[id.0] != usize::MAX {
                            return Err(Error::Parse {
                                pos: 0,
                                msg: "node shared between parents".to_string(),
                            });
                        }
                        stack.push((id, true));
                        stack.push((right, false));
                        stack.push((left, false));
                    } else {
                        remap[id.0] = nodes.len();
                        nodes.push(Node::Internal {
                            left: NodeId(remap[left.0]),
                            right: NodeId(remap[right.0]),
                            size,
                            min_leaf,
                        });
                    }
                }
            }
        }
        seen_leaves.sort_unstable();
        if let Some(p) = seen_leaves.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateVertex(p[0]));
        }
        let root = NodeId(nodes.len() - 1);
        Ok(HCTree { nodes, root })
    }
}

/// A rooted binary tree whose leaves are distinct vertex labels.
///
/// Trees produced for a whole graph have exactly the leaves `0..n`; trees
/// produced for a restriction carry the restricted labels.
#[derive(Clone)]
pub struct HCTree {
    nodes: Vec<Node>,
    root: NodeId,
}

impl PartialEq for HCTree {
    /// Structural equality up to child order.
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.to_string() == other.to_string()
    }
}

impl Eq for HCTree {}

impl fmt::Debug for HCTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HCTree({self})")
    }
}

impl HCTree {
    /// A single-leaf tree.
    pub fn leaf(v: usize) -> Self {
        HCTree {
            nodes: vec![Node::Leaf(v)],
            root: NodeId(0),
        }
    }

    /// Puts `left` and `right` under a new root.
    pub fn join(left: &HCTree, right: &HCTree) -> Result<Self> {
        let mut b = TreeBuilder::with_capacity(left.len() + right.len());
        let l = b.graft(left);
        let r = b.graft(right);
        let root = b.join(l, r);
        b.finish(root)
    }

    /// Parses the nested-parentheses form and checks the leaves are `0..n`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let tree = parse_tree(text.trim())?;
        tree.check_leaves(n)?;
        Ok(tree)
    }

    /// Parses the nested-parentheses form without constraining leaf labels.
    pub fn parse_labels(text: &str) -> Result<Self> {
        parse_tree(text.trim())
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id.0]
    }

    /// Number of leaves.
    pub fn len(&self) -> usize {
        self.nodes[self.root.0].size()
    }

    /// Always false: a tree has at least one leaf.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Leaf labels in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        self.leaves_under(self.root)
    }

    pub fn leaves_under(&self, id: NodeId) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes[id.0].size());
        let mut stack = vec![id];
        while let Some(id) = stack.pop() {
            match self.nodes[id.0] {
                Node::Leaf(v) => out.push(v),
                Node::Internal { left, right, .. } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        out
    }

    pub fn leaf_set(&self) -> VertexSet {
        // leaves are distinct by construction
        VertexSet::new(self.leaves()).expect("distinct leaves")
    }

    /// The two leaf sets under the root, in stored child order.
    pub fn root_split(&self) -> Option<(VertexSet, VertexSet)> {
        match self.nodes[self.root.0] {
            Node::Leaf(_) => None,
            Node::Internal { left, right, .. } => Some((
                VertexSet::new(self.leaves_under(left)).expect("distinct leaves"),
                VertexSet::new(self.leaves_under(right)).expect("distinct leaves"),
            )),
        }
    }

    /// Children of an internal node ordered by smallest leaf.
    pub fn canonical_children(&self, id: NodeId) -> Option<(NodeId, NodeId)> {
        match self.nodes[id.0] {
            Node::Leaf(_) => None,
            Node::Internal { left, right, .. } => {
                if self.nodes[left.0].min_leaf() <= self.nodes[right.0].min_leaf() {
                    Some((left, right))
                } else {
                    Some((right, left))
                }
            }
        }
    }

    /// Swaps the stored child order of an internal node.
    pub fn swap_children(&mut self, id: NodeId) {
        if let Node::Internal { left, right, .. } = &mut self.nodes[id.0] {
            core::mem::swap(left, right);
        }
    }

    /// Ids of all internal nodes.
    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len())
            .filter(|&k| matches!(self.nodes[k], Node::Internal { .. }))
            .map(NodeId)
    }

    /// Relabels every leaf through `f`; `f` must be injective.
    pub fn map_leaves<F: Fn(usize) -> usize>(&self, f: F) -> Result<Self> {
        let mut b = TreeBuilder::with_capacity(self.len());
        let mut ids = Vec::with_capacity(self.nodes.len());
        // nodes are stored children-first
        for node in &self.nodes {
            let id = match *node {
                Node::Leaf(v) => b.leaf(f(v)),
                Node::Internal { left, right, .. } => b.join(ids[left.0], ids[right.0]),
            };
            ids.push(id);
        }
        b.finish(ids[self.root.0])
    }

    /// Checks that the leaves are exactly `0..n`.
    pub fn check_leaves(&self, n: usize) -> Result<()> {
        if self.len() != n || self.leaves().iter().any(|&v| v >= n) {
            return Err(Error::LeafMismatch(n));
        }
        Ok(())
    }

    /// `|T(i,j)|`: leaves under the least common ancestor of `i` and `j`.
    pub fn lca_leaf_count(&self, i: usize, j: usize) -> Result<usize> {
        if i == j {
            return Err(Error::SelfPair(i));
        }
        let mut parent = vec![usize::MAX; self.nodes.len()];
        let (mut at_i, mut at_j) = (None, None);
        for (k, node) in self.nodes.iter().enumerate() {
            match *node {
                Node::Leaf(v) if v == i => at_i = Some(k),
                Node::Leaf(v) if v == j => at_j = Some(k),
                Node::Leaf(_) => {}
                Node::Internal { left, right, .. } => {
                    parent[left.0] = k;
                    parent[right.0] = k;
                }
            }
        }
        let a = at_i.ok_or(Error::UnknownLeaf(i))?;
        let b = at_j.ok_or(Error::UnknownLeaf(j))?;
        let mut on_path = vec![false; self.nodes.len()];
        let mut k = a;
        while k != usize::MAX {
            on_path[k] = true;
            k = parent[k];
        }
        let mut k = b;
        while !on_path[k] {
            k = parent[k];
        }
        Ok(self.nodes[k].size())
    }

    /// Left-to-right leaf order and, per node, the offset of its first leaf.
    fn layout(&self) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(self.len());
        let mut start = vec![0; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            start[id.0] = order.len();
            match self.nodes[id.0] {
                Node::Leaf(v) => order.push(v),
                Node::Internal { left, right, .. } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        (order, start)
    }

    /// `Σ_nodes w(S1, S2) * factor(|S1| + |S2|)` over internal nodes with
    /// children `S1`, `S2`.
    fn split_sum<F: Fn(usize) -> f64>(&self, g: &SimilarityGraph, factor: F) -> Result<f64> {
        self.check_leaves(g.n())?;
        let (order, start) = self.layout();
        let mut total = 0.0;
        for node in &self.nodes {
            if let Node::Internal {
                left, right, size, ..
            } = *node
            {
                let f = factor(size);
                if f == 0.0 {
                    continue;
                }
                let ls = start[left.0];
                let rs = start[right.0];
                let left_leaves = &order[ls..ls + self.nodes[left.0].size()];
                let right_leaves = &order[rs..rs + self.nodes[right.0].size()];
                let mut cut = 0.0;
                for &i in left_leaves {
                    for &j in right_leaves {
                        cut += g.weight(i, j);
                    }
                }
                total += cut * f;
            }
        }
        Ok(total)
    }

    /// Moseley-Wang value `Σ_{i<j} w_ij (n - |T(i,j)|)`.
    pub fn mw_objective(&self, g: &SimilarityGraph) -> Result<f64> {
        let n = g.n();
        self.split_sum(g, |size| (n - size) as f64)
    }

    /// Dasgupta cost `Σ_{i<j} w_ij |T(i,j)|`.
    pub fn dasgupta_objective(&self, g: &SimilarityGraph) -> Result<f64> {
        self.split_sum(g, |size| size as f64)
    }
}

impl fmt::Display for HCTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Step {
            Visit(NodeId),
            Text(&'static str),
        }
        let mut stack = vec![Step::Visit(self.root)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Text(s) => f.write_str(s)?,
                Step::Visit(id) => match self.canonical_children(id) {
                    None => write!(f, "{}", self.nodes[id.0].min_leaf())?,
                    Some((first, second)) => {
                        f.write_str("(")?;
                        stack.push(Step::Text(")"));
                        stack.push(Step::Visit(second));
                        stack.push(Step::Text(","));
                        stack.push(Step::Visit(first));
                    }
                },
            }
        }
        Ok(())
    }
}

impl core::str::FromStr for HCTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_labels(s)
    }
}

fn parse_error(pos: usize, msg: &str) -> Error {
    Error::Parse {
        pos,
        msg: msg.to_string(),
    }
}

fn parse_tree(text: &str) -> Result<HCTree> {
    let bytes = text.as_bytes();
    let mut b = TreeBuilder::new();
    // one entry per open parenthesis: its left child once parsed
    let mut open: Vec<Option<NodeId>> = Vec::new();
    let mut pos = 0;
    loop {
        // expecting a subtree
        let mut node = match bytes.get(pos) {
            Some(b'(') => {
                open.push(None);
                pos += 1;
                continue;
            }
            Some(c) if c.is_ascii_digit() => {
                let begin = pos;
                while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
                    pos += 1;
                }
                let label = text[begin..pos]
                    .parse::<usize>()
                    .map_err(|_| parse_error(begin, "leaf label too large"))?;
                b.leaf(label)
            }
            Some(_) => return Err(parse_error(pos, "expected '(' or a leaf label")),
            None => return Err(parse_error(pos, "unexpected end of input")),
        };
        // a subtree is complete; attach it
        loop {
            match open.last_mut() {
                None => {
                    if pos != bytes.len() {
                        return Err(parse_error(pos, "trailing input"));
                    }
                    return b.finish(node);
                }
                Some(slot @ None) => {
                    if bytes.get(pos) != Some(&b',') {
                        return Err(parse_error(pos, "expected ','"));
                    }
                    *slot = Some(node);
                    pos += 1;
                    break;
                }
                Some(Some(left)) => {
                    if bytes.get(pos) != Some(&b')') {
                        return Err(parse_error(pos, "expected ')'"));
                    }
                    let left = *left;
                    open.pop();
                    pos += 1;
                    node = b.join(left, node);
                }
            }
        }
    }
}
