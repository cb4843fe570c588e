//! Similarity graphs and vertex sets.
//!
//! A [`SimilarityGraph`] is a symmetric, nonnegative weight function over
//! unordered pairs of the vertices `0..n`. Absent pairs have weight zero.
//! Graphs up to [`DENSE_LIMIT`] vertices are stored as a full matrix, larger
//! ones as sorted adjacency lists; both sit behind the same interface.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest vertex count stored as a dense matrix.
pub const DENSE_LIMIT: usize = 2048;

#[derive(Clone, PartialEq)]
enum Backing {
    /// Row-major `n * n`, symmetric, zero diagonal.
    Dense(Vec<f64>),
    /// Per-vertex neighbour lists sorted by index, only positive weights.
    Sparse(Vec<Vec<(usize, f64)>>),
}

/// Symmetric nonnegative pairwise similarities over `n` points.
#[derive(Clone, PartialEq)]
pub struct SimilarityGraph {
    n: usize,
    backing: Backing,
    total: f64,
}

impl fmt::Debug for SimilarityGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimilarityGraph")
            .field("n", &self.n)
            .field("pairs", &self.pair_count())
            .field("total_weight", &self.total)
            .finish()
    }
}

fn check_weight(u: usize, v: usize, weight: f64) -> Result<()> {
    if weight.is_finite() && weight >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight { u, v, weight })
    }
}

impl SimilarityGraph {
    /// Builds a graph from weighted pairs.
    ///
    /// Each unordered pair may appear at most once, in either orientation.
    /// Zero weights are accepted and treated as absent.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut lists: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfPair(u));
            }
            check_weight(u, v, w)?;
            let (lo, hi) = if u < v { (u, v) } else { (v, u) };
            lists[lo].push((hi, w));
        }
        for (u, list) in lists.iter_mut().enumerate() {
            list.sort_by_key(|&(v, _)| v);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::DuplicatePair(u, pair[0].0));
            }
        }
        let upper = lists;
        if n <= DENSE_LIMIT {
            let mut m = vec![0.0; n * n];
            for (u, list) in upper.iter().enumerate() {
                for &(v, w) in list {
                    m[u * n + v] = w;
                    m[v * n + u] = w;
                }
            }
            Ok(Self::with_backing(n, Backing::Dense(m)))
        } else {
            let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
            for (u, list) in upper.iter().enumerate() {
                for &(v, w) in list.iter().filter(|&&(_, w)| w > 0.0) {
                    adj[u].push((v, w));
                    adj[v].push((u, w));
                }
            }
            for list in &mut adj {
                list.sort_by_key(|&(v, _)| v);
            }
            Ok(Self::with_backing(n, Backing::Sparse(adj)))
        }
    }

    /// Builds a dense graph by evaluating `weight(i, j)` for every `i < j`.
    pub fn from_fn<F>(n: usize, mut weight: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> f64,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = weight(i, j);
                check_weight(i, j, w)?;
                if w != 0.0 {
                    edges.push((i, j, w));
                }
            }
        }
        Self::from_edges(n, edges)
    }

    /// `n` vertices, no similarity at all.
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, core::iter::empty())
    }

    fn with_backing(n: usize, backing: Backing) -> Self {
        let mut g = SimilarityGraph {
            n,
            backing,
            total: 0.0,
        };
        g.total = g.pairs().map(|(_, _, w)| w).sum();
        g
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.backing, Backing::Dense(_))
    }

    /// Similarity of `i` and `j`; zero for `i == j` or absent pairs.
    ///
    /// Panics if either index is out of range.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "vertex out of range");
        match &self.backing {
            Backing::Dense(m) => m[i * self.n + j],
            Backing::Sparse(adj) => adj[i]
                .binary_search_by_key(&j, |&(v, _)| v)
                .map(|k| adj[i][k].1)
                .unwrap_or(0.0),
        }
    }

    /// Neighbours of `i` with positive weight, in increasing index order.
    pub fn neighbors(&self, i: usize) -> Neighbors<'_> {
        match &self.backing {
            Backing::Dense(m) => Neighbors::Dense {
                row: &m[i * self.n..(i + 1) * self.n],
                next: 0,
            },
            Backing::Sparse(adj) => Neighbors::Sparse(adj[i].iter()),
        }
    }

    /// All pairs `(i, j, w)` with `i < j` and `w > 0`, lexicographically.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| j > i)
                .map(move |(j, w)| (i, j, w))
        })
    }

    /// Number of pairs with positive weight.
    pub fn pair_count(&self) -> usize {
        self.pairs().count()
    }

    /// `W`, the sum of all pairwise similarities.
    pub fn total_weight(&self) -> f64 {
        self.total
    }

    /// `w(S)`: total similarity of pairs inside `s`.
    pub fn within_weight(&self, s: &VertexSet) -> Result<f64> {
        self.check_universe(s)?;
        let members = s.as_slice();
        Ok(match &self.backing {
            Backing::Dense(m) => {
                let mut sum = 0.0;
                for (k, &i) in members.iter().enumerate() {
                    let row = &m[i * self.n..];
                    for &j in &members[k + 1..] {
                        sum += row[j];
                    }
                }
                sum
            }
            Backing::Sparse(_) => {
                let mask = s.mask_of(self.n);
                members
                    .iter()
                    .flat_map(|&i| self.neighbors(i).map(move |(j, w)| (i, j, w)))
                    .filter(|&(i, j, _)| j > i && mask[j])
                    .map(|(_, _, w)| w)
                    .sum()
            }
        })
    }

    /// `w(S, T)`: total similarity between two disjoint sets.
    pub fn cut_weight(&self, s: &VertexSet, t: &VertexSet) -> Result<f64> {
        self.check_universe(s)?;
        self.check_universe(t)?;
        let mask = s.mask_of(self.n);
        if let Some(&v) = t.iter().find(|&&v| mask[v]) {
            return Err(Error::Overlap(v));
        }
        Ok(match &self.backing {
            Backing::Dense(m) => {
                let mut sum = 0.0;
                for &i in s.as_slice() {
                    let row = &m[i * self.n..];
                    for &j in t.as_slice() {
                        sum += row[j];
                    }
                }
                sum
            }
            Backing::Sparse(_) => {
                let tmask = t.mask_of(self.n);
                s.iter()
                    .flat_map(|&i| self.neighbors(i))
                    .filter(|&(j, _)| tmask[j])
                    .map(|(_, w)| w)
                    .sum()
            }
        })
    }

    /// The subgraph induced by `s`; vertex `k` of the result is `s[k]`.
    pub fn induced(&self, s: &VertexSet) -> Result<SimilarityGraph> {
        self.check_universe(s)?;
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let members = s.as_slice();
        let mut local = vec![usize::MAX; self.n];
        for (k, &v) in members.iter().enumerate() {
            local[v] = k;
        }
        let mut edges = Vec::new();
        for (k, &i) in members.iter().enumerate() {
            for (j, w) in self.neighbors(i) {
                let lj = local[j];
                if lj != usize::MAX && lj > k {
                    edges.push((k, lj, w));
                }
            }
        }
        SimilarityGraph::from_edges(members.len(), edges)
    }

    fn check_universe(&self, s: &VertexSet) -> Result<()> {
        match s.iter().find(|&&v| v >= self.n) {
            Some(&v) => Err(Error::VertexOutOfRange { vertex: v, n: self.n }),
            None => Ok(()),
        }
    }
}

/// Iterator over the positive-weight neighbours of a vertex.
#[derive(Debug, Clone)]
pub enum Neighbors<'a> {
    #[doc(hidden)]
    Dense { row: &'a [f64], next: usize },
    #[doc(hidden)]
    Sparse(core::slice::Iter<'a, (usize, f64)>),
}

impl Iterator for Neighbors<'_> {
    type Item = (usize, f64);

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            Neighbors::Dense { row, next } => {
                while *next < row.len() {
                    let j = *next;
                    *next += 1;
                    if row[j] != 0.0 {
                        return Some((j, row[j]));
                    }
                }
                None
            }
            Neighbors::Sparse(it) => it.next().copied(),
        }
    }
}

/// An immutable set of vertex indices, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.members).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl VertexSet {
    /// Collects `members`, rejecting duplicates.
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        if let Some(p) = members.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateVertex(p[0]));
        }
        Ok(VertexSet { members })
    }

    /// Like [`VertexSet::new`] but also checks every index is below `n`.
    pub fn within<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self> {
        let s = Self::new(members)?;
        match s.members.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(s),
        }
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        VertexSet {
            members: (0..n).collect(),
        }
    }

    pub fn empty() -> Self {
        VertexSet {
            members: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.members.first().copied()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, usize> {
        self.members.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    /// `[0, n) \ self`.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mask = self.mask_of(n);
        VertexSet {
            members: (0..n).filter(|&v| !mask[v]).collect(),
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut members: Vec<usize> = self.iter().chain(other.iter()).copied().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().all(|&v| !large.contains(v))
    }

    /// Membership bitmap over `0..n.max(max member + 1)`.
    pub(crate) fn mask_of(&self, n: usize) -> Vec<bool> {
        let len = n.max(self.members.last().map_or(0, |&v| v + 1));
        let mut mask = vec![false; len];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.members
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = core::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}
