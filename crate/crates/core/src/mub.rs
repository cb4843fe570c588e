//! Max-Uncut Bisection: split the vertices into two halves keeping as much
//! similarity as possible inside the halves.
//!
//! For odd `n` the halves have sizes `⌈n/2⌉` and `⌊n/2⌋`, in either order.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{SimilarityGraph, VertexSet};
use crate::{Error, Result};

/// A balanced partition `(L, R)` together with its uncut weight
/// `w(L) + w(R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bisection {
    left: VertexSet,
    right: VertexSet,
    uncut_weight: f64,
}

impl Bisection {
    /// Uses `left` as `L` and its complement as `R`.
    pub fn from_left(g: &SimilarityGraph, left: VertexSet) -> Result<Self> {
        let right = left.complement(g.n());
        Self::new(g, left, right)
    }

    /// Checks that `left` and `right` partition the vertices with sizes
    /// differing by at most one.
    pub fn new(g: &SimilarityGraph, left: VertexSet, right: VertexSet) -> Result<Self> {
        if let Some(&v) = left.iter().chain(right.iter()).find(|&&v| v >= g.n()) {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
        if let Some(&v) = left.iter().find(|&&v| right.contains(v)) {
            return Err(Error::Overlap(v));
        }
        if left.len() + right.len() != g.n() || left.len().abs_diff(right.len()) > 1 {
            return Err(Error::Unbalanced {
                left: left.len(),
                right: right.len(),
            });
        }
        let uncut_weight = g.within_weight(&left)? + g.within_weight(&right)?;
        Ok(Bisection {
            left,
            right,
            uncut_weight,
        })
    }

    pub fn left(&self) -> &VertexSet {
        &self.left
    }

    pub fn right(&self) -> &VertexSet {
        &self.right
    }

    pub fn uncut_weight(&self) -> f64 {
        self.uncut_weight
    }

    /// Swaps the roles of `L` and `R`.
    pub fn flipped(self) -> Self {
        Bisection {
            left: self.right,
            right: self.left,
            uncut_weight: self.uncut_weight,
        }
    }

    /// Same bisection with vertex 0's side as `L`.
    fn with_zero_left(self) -> Self {
        if self.left.contains(0) {
            self
        } else {
            self.flipped()
        }
    }
}

/// A Max-Uncut Bisection strategy.
///
/// `rho` is the approximation ratio the strategy is reported under; it is
/// never used to change the computed bisection.
pub trait MubSolver {
    fn name(&self) -> &str;

    fn rho(&self) -> f64;

    fn solve(&self, g: &SimilarityGraph) -> Result<Bisection>;
}

impl<S: MubSolver + ?Sized> MubSolver for &S {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn rho(&self) -> f64 {
        (**self).rho()
    }

    fn solve(&self, g: &SimilarityGraph) -> Result<Bisection> {
        (**self).solve(g)
    }
}

/// Default vertex limit of [`ExactMub`].
pub const EXACT_MUB_LIMIT: usize = 24;

/// Exhaustive search over all balanced bisections.
///
/// Among optimal bisections the one whose `L` (the side holding vertex 0) is
/// lexicographically smallest is returned.
#[derive(Debug, Clone, Copy)]
pub struct ExactMub {
    pub limit: usize,
}

impl Default for ExactMub {
    fn default() -> Self {
        ExactMub {
            limit: EXACT_MUB_LIMIT,
        }
    }
}

impl MubSolver for ExactMub {
    fn name(&self) -> &str {
        "exact"
    }

    fn rho(&self) -> f64 {
        1.0
    }

    fn solve(&self, g: &SimilarityGraph) -> Result<Bisection> {
        exact_mub_with_limit(g, self.limit)
    }
}

/// [`ExactMub`] with the default limit.
pub fn exact_mub(g: &SimilarityGraph) -> Result<Bisection> {
    exact_mub_with_limit(g, EXACT_MUB_LIMIT)
}

fn exact_mub_with_limit(g: &SimilarityGraph, limit: usize) -> Result<Bisection> {
    let n = g.n();
    let limit = limit.min(31);
    if n > limit {
        return Err(Error::TooLarge {
            what: "exact bisection",
            n,
            limit,
        });
    }
    if n < 2 {
        return Err(Error::TooSmall {
            what: "bisection",
            n,
        });
    }
    let mut search = ExactSearch {
        n,
        w: dense(g),
        sizes: (n / 2, n.div_ceil(2)),
        to_left: vec![0.0; n],
        to_right: vec![0.0; n],
        best_value: f64::NEG_INFINITY,
        best_left: 0,
    };
    // vertex 0 always goes left
    search.place(0, true);
    search.descend(1, 1, 0, 0.0);
    let left = VertexSet::new((0..n).filter(|&v| search.best_left >> v & 1 == 1))?;
    Bisection::from_left(g, left)
}

fn dense(g: &SimilarityGraph) -> Vec<f64> {
    let n = g.n();
    let mut w = vec![0.0; n * n];
    for (i, j, x) in g.pairs() {
        w[i * n + j] = x;
        w[j * n + i] = x;
    }
    w
}

struct ExactSearch {
    n: usize,
    w: Vec<f64>,
    /// Allowed `|L|`, low and high.
    sizes: (usize, usize),
    to_left: Vec<f64>,
    to_right: Vec<f64>,
    best_value: f64,
    best_left: u32,
}

impl ExactSearch {
    fn place(&mut self, v: usize, left: bool) {
        let row = &self.w[v * self.n..(v + 1) * self.n];
        let acc = if left {
            &mut self.to_left
        } else {
            &mut self.to_right
        };
        for (a, &x) in acc.iter_mut().zip(row) {
            *a += x;
        }
    }

    fn unplace(&mut self, v: usize, left: bool) {
        let row = &self.w[v * self.n..(v + 1) * self.n];
        let acc = if left {
            &mut self.to_left
        } else {
            &mut self.to_right
        };
        for (a, &x) in acc.iter_mut().zip(row) {
            *a -= x;
        }
    }

    /// Vertices `< v` are placed; `mask` holds `L`, `value` the uncut weight
    /// among placed vertices.
    fn descend(&mut self, v: usize, left_count: usize, mask: u32, value: f64) {
        let mask = mask | 1;
        if v == self.n {
            if left_count < self.sizes.0 {
                return;
            }
            let scale = value.abs().max(self.best_value.abs()).max(1.0);
            let tie = self.best_left != 0 && (value - self.best_value).abs() <= 1e-12 * scale;
            if (!tie && value > self.best_value) || (tie && lex_less(mask, self.best_left)) {
                self.best_value = value;
                self.best_left = mask;
            }
            return;
        }
        let right_count = v - left_count;
        if left_count < self.sizes.1 {
            let gain = self.to_left[v];
            self.place(v, true);
            self.descend(v + 1, left_count + 1, mask | 1 << v, value + gain);
            self.unplace(v, true);
        }
        if right_count < self.n - self.sizes.0 {
            let gain = self.to_right[v];
            self.place(v, false);
            self.descend(v + 1, left_count, mask, value + gain);
            self.unplace(v, false);
        }
    }
}

/// Lexicographic order of the sorted member lists of two bitmask sets.
fn lex_less(a: u32, b: u32) -> bool {
    let mut a = a;
    let mut b = b;
    loop {
        match (a, b) {
            (0, 0) => return false,
            (0, _) => return true,
            (_, 0) => return false,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x < y;
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// Swap-based hill climbing from seeded random balanced starts.
///
/// Restart `k` draws its start from ChaCha8 seeded with `seed` on stream `k`,
/// so running `r + 1` restarts repeats the first `r` and the result never gets
/// worse as `restarts` grows. For odd `n` a single vertex may also move from
/// the larger half to the smaller one.
#[derive(Debug, Clone, Copy)]
pub struct LocalSearchMub {
    pub seed: u64,
    pub restarts: usize,
    /// Ratio reported alongside results; the heuristic has no guarantee.
    pub nominal_rho: f64,
}

impl LocalSearchMub {
    pub fn new(seed: u64, restarts: usize) -> Self {
        LocalSearchMub {
            seed,
            restarts: restarts.max(1),
            nominal_rho: 0.5,
        }
    }
}

impl MubSolver for LocalSearchMub {
    fn name(&self) -> &str {
        "local"
    }

    fn rho(&self) -> f64 {
        self.nominal_rho
    }

    fn solve(&self, g: &SimilarityGraph) -> Result<Bisection> {
        local_search_mub(g, self.seed, self.restarts)
    }
}

/// Best swap-optimal bisection over `restarts` seeded random starts.
pub fn local_search_mub(g: &SimilarityGraph, seed: u64, restarts: usize) -> Result<Bisection> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooSmall {
            what: "bisection",
            n,
        });
    }
    let adjacency: Vec<Vec<(usize, f64)>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let tolerance = 1e-12 * g.total_weight().max(1.0);
    let mut best: Option<Bisection> = None;
    for k in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut side = vec![false; n];
        for &v in &order[..n.div_ceil(2)] {
            side[v] = true;
        }
        climb(g, &adjacency, &mut side, tolerance);
        let left = VertexSet::new((0..n).filter(|&v| side[v]))?;
        let candidate = Bisection::from_left(g, left)?;
        if best
            .as_ref()
            .is_none_or(|b| candidate.uncut_weight() > b.uncut_weight())
        {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one restart").with_zero_left())
}

/// Best-improvement local search; `side[v]` is true for `L`.
fn climb(g: &SimilarityGraph, adjacency: &[Vec<(usize, f64)>], side: &mut [bool], tolerance: f64) {
    let n = side.len();
    // to_side[v] = (w(v, L), w(v, R))
    let mut to_left = vec![0.0; n];
    let mut to_right = vec![0.0; n];
    for (v, list) in adjacency.iter().enumerate() {
        for &(u, w) in list {
            if side[u] {
                to_left[v] += w;
            } else {
                to_right[v] += w;
            }
        }
    }
    let relocate = |v: usize, side: &mut [bool], to_left: &mut [f64], to_right: &mut [f64]| {
        let was_left = side[v];
        side[v] = !was_left;
        for &(u, w) in &adjacency[v] {
            if was_left {
                to_left[u] -= w;
                to_right[u] += w;
            } else {
                to_right[u] -= w;
                to_left[u] += w;
            }
        }
    };
    loop {
        // gain of moving v to the other side, ignoring its partner
        let gain = |v: usize| {
            if side[v] {
                to_right[v] - to_left[v]
            } else {
                to_left[v] - to_right[v]
            }
        };
        let mut best_gain = tolerance;
        let mut best_move: Option<(usize, Option<usize>)> = None;
        let left_count = side.iter().filter(|&&s| s).count();
        if n % 2 == 1 {
            let larger_is_left = left_count > n - left_count;
            for v in (0..n).filter(|&v| side[v] == larger_is_left) {
                let d = gain(v);
                if d > best_gain {
                    best_gain = d;
                    best_move = Some((v, None));
                }
            }
        }
        for u in (0..n).filter(|&u| side[u]) {
            let gu = gain(u);
            for v in (0..n).filter(|&v| !side[v]) {
                let d = gu + gain(v) - 2.0 * g.weight(u, v);
                if d > best_gain {
                    best_gain = d;
                    best_move = Some((u, Some(v)));
                }
            }
        }
        match best_move {
            None => break,
            Some((u, partner)) => {
                relocate(u, side, &mut to_left, &mut to_right);
                if let Some(v) = partner {
                    relocate(v, side, &mut to_left, &mut to_right);
                }
            }
        }
    }
}
