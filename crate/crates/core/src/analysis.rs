//! Executable versions of the quantities used to bound the bisection
//! pipeline against the optimum.
//!
//! An optimal tree has a unique lowest node with more than `n/2` leaves whose
//! children both have at most `n/2` leaves. Its children's leaf sets are `A`
//! and `B`; the remaining leaves form `C`. `alpha` is the similarity inside
//! the three sets, `beta` the similarity across them. From the sizes of `A`,
//! `B` and `C` a randomized procedure builds an exact bisection whose expected
//! uncut weight is at least `alpha - (alpha - beta) * delta`, with `delta`
//! bounded by [`delta_max`].

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{SimilarityGraph, VertexSet};
use crate::mub::Bisection;
use crate::tree::HCTree;
use crate::{Error, Result};

/// The `(A, B, C)` split of a tree with its weight aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeSetDecomposition {
    pub a: VertexSet,
    pub b: VertexSet,
    pub c: VertexSet,
    /// `w(A) + w(B) + w(C)`.
    pub alpha: f64,
    /// `w(A,B) + w(B,C) + w(A,C)`.
    pub beta: f64,
    n: usize,
}

impl ThreeSetDecomposition {
    /// Validates that `a`, `b`, `c` partition `0..n` with `|A|, |B| <= n/2`
    /// and `|C| < n/2`, then computes `alpha` and `beta`.
    pub fn new(g: &SimilarityGraph, a: VertexSet, b: VertexSet, c: VertexSet) -> Result<Self> {
        let n = g.n();
        if a.len() + b.len() + c.len() != n
            || !a.is_disjoint(&b)
            || !a.is_disjoint(&c)
            || !b.is_disjoint(&c)
        {
            return Err(Error::InvalidDecomposition("sets must partition the vertices"));
        }
        if 2 * a.len() > n || 2 * b.len() > n || 2 * c.len() >= n {
            return Err(Error::InvalidDecomposition("size restriction violated"));
        }
        let alpha = g.within_weight(&a)? + g.within_weight(&b)? + g.within_weight(&c)?;
        let beta = g.cut_weight(&a, &b)? + g.cut_weight(&b, &c)? + g.cut_weight(&a, &c)?;
        Ok(ThreeSetDecomposition {
            a,
            b,
            c,
            alpha,
            beta,
            n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `c = |C| / n`.
    pub fn c_fraction(&self) -> f64 {
        self.c.len() as f64 / self.n as f64
    }

    /// True when `|A| = n/2` or `|B| = n/2`, where the coefficient formulas
    /// are undefined.
    pub fn is_degenerate(&self) -> bool {
        2 * self.a.len() == self.n || 2 * self.b.len() == self.n
    }
}

/// Finds the `(A, B, C)` split of `t` and evaluates it on `g`.
///
/// Walks down from the root along nodes with more than `n/2` leaves until
/// both children have at most `n/2`; `A` is the child holding the smaller
/// leaf label.
pub fn decompose_opt_tree(t: &HCTree, g: &SimilarityGraph) -> Result<ThreeSetDecomposition> {
    let n = g.n();
    t.check_leaves(n)?;
    if n < 2 {
        return Err(Error::TooSmall {
            what: "three-set decomposition",
            n,
        });
    }
    let mut node = t.root();
    let (first, second) = loop {
        let (first, second) = t
            .canonical_children(node)
            .expect("a node with more than n/2 >= 1 leaves is internal");
        let big = |id| 2 * t.node(id).size() > n;
        if big(first) {
            node = first;
        } else if big(second) {
            node = second;
        } else {
            break (first, second);
        }
    };
    let a = VertexSet::new(t.leaves_under(first))?;
    let b = VertexSet::new(t.leaves_under(second))?;
    let c = a.union(&b).complement(n);
    ThreeSetDecomposition::new(g, a, b, c)
}

/// `alpha (n - 2) + beta |C|`, an upper bound on the value of the tree the
/// decomposition came from.
pub fn opt_upper_bound(g: &SimilarityGraph, d: &ThreeSetDecomposition) -> Result<f64> {
    if d.n != g.n() {
        return Err(Error::InvalidDecomposition("decomposition is for another graph"));
    }
    let n = g.n() as f64;
    Ok(d.alpha * (n - 2.0) + d.beta * d.c.len() as f64)
}

/// `c (1 - 2c) / (1 - 3c²)` for `0 <= c < 1/2`.
pub fn delta_max(c: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&c) {
        return Err(Error::OutOfRange {
            name: "c",
            value: c,
        });
    }
    Ok(c * (1.0 - 2.0 * c) / (1.0 - 3.0 * c * c))
}

/// Selection probabilities and per-set cut probabilities of the randomized
/// bisection.
///
/// With `ā = 1/2 - a` and likewise for `b`, `c`:
/// `q_A = 2 b̄ c̄ / (b̄ + c̄)²` (cyclically), `p_A ∝ q_B q_C`, and
/// `delta = q_A q_B q_C / (q_A q_B + q_B q_C + q_A q_C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionCoefficients {
    pub q_a: f64,
    pub q_b: f64,
    pub q_c: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_c: f64,
    pub delta: f64,
}

impl BisectionCoefficients {
    /// Coefficients for size fractions `a + b + c = 1`.
    ///
    /// Returns `Ok(None)` in the degenerate case `a = 1/2` or `b = 1/2`.
    pub fn from_fractions(a: f64, b: f64, c: f64) -> Result<Option<Self>> {
        for (name, value) in [("a", a), ("b", b)] {
            if !(0.0..=0.5).contains(&value) {
                return Err(Error::OutOfRange { name, value });
            }
        }
        if !(0.0..0.5).contains(&c) {
            return Err(Error::OutOfRange {
                name: "c",
                value: c,
            });
        }
        if (a + b + c - 1.0).abs() > 1e-9 {
            return Err(Error::OutOfRange {
                name: "a + b + c",
                value: a + b + c,
            });
        }
        let (abar, bbar, cbar) = (0.5 - a, 0.5 - b, 0.5 - c);
        if abar <= 0.0 || bbar <= 0.0 {
            return Ok(None);
        }
        let q = |x: f64, y: f64| 2.0 * x * y / ((x + y) * (x + y));
        let q_a = q(bbar, cbar);
        let q_b = q(abar, cbar);
        let q_c = q(abar, bbar);
        let denom = q_a * q_b + q_b * q_c + q_a * q_c;
        Ok(Some(BisectionCoefficients {
            q_a,
            q_b,
            q_c,
            p_a: q_b * q_c / denom,
            p_b: q_a * q_c / denom,
            p_c: q_a * q_b / denom,
            delta: q_a * q_b * q_c / denom,
        }))
    }
}

/// Coefficients of a decomposition, `None` when it is degenerate.
pub fn bisection_coefficients(d: &ThreeSetDecomposition) -> Option<BisectionCoefficients> {
    if d.is_degenerate() {
        return None;
    }
    let n = d.n as f64;
    let a = d.a.len() as f64 / n;
    let b = d.b.len() as f64 / n;
    let c = d.c.len() as f64 / n;
    BisectionCoefficients::from_fractions(a, b, c)
        .ok()
        .flatten()
}

/// Randomized exact bisection built from a decomposition, seeded.
pub fn randomized_bisection(
    g: &SimilarityGraph,
    d: &ThreeSetDecomposition,
    seed: u64,
) -> Result<Bisection> {
    randomized_bisection_with(g, d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Randomized exact bisection built from a decomposition.
///
/// One of `A`, `B`, `C` is chosen with probability `p_A`, `p_B`, `p_C` and
/// split uniformly at random; the other two sets stay whole:
///
/// * `A` chosen: `L = B ∪ S_B`, `R = C ∪ S_C`,
/// * `B` chosen: `L = C ∪ S_C`, `R = A ∪ S_A`,
/// * `C` chosen: `L = A ∪ S_A`, `R = B ∪ S_B`,
///
/// where each `S_X` tops its side up to exactly `n/2` vertices. Degenerate
/// decompositions return `(A, B ∪ C)` when `|A| = n/2`, otherwise
/// `(B, A ∪ C)`.
pub fn randomized_bisection_with<R: Rng + ?Sized>(
    g: &SimilarityGraph,
    d: &ThreeSetDecomposition,
    rng: &mut R,
) -> Result<Bisection> {
    let n = g.n();
    if d.n != n {
        return Err(Error::InvalidDecomposition("decomposition is for another graph"));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::OddSize(n));
    }
    let half = n / 2;
    if 2 * d.a.len() == n {
        return Bisection::new(g, d.a.clone(), d.b.union(&d.c));
    }
    if 2 * d.b.len() == n {
        return Bisection::new(g, d.b.clone(), d.a.union(&d.c));
    }
    let coef = bisection_coefficients(d).expect("non-degenerate");
    let u: f64 = rng.random();
    // (set to split, set completed by the first part, set completed by the rest)
    let (split, first_home, second_home) = if u < coef.p_a {
        (&d.a, &d.b, &d.c)
    } else if u < coef.p_a + coef.p_b {
        (&d.b, &d.c, &d.a)
    } else {
        (&d.c, &d.a, &d.b)
    };
    let mut pool: Vec<usize> = split.as_slice().to_vec();
    pool.shuffle(rng);
    // integral for even n: the fractional size formula reduces to n/2 - |home|
    let first_len = half - first_home.len();
    let (to_first, to_second) = pool.split_at(first_len);
    let left = first_home.union(&VertexSet::new(to_first.iter().copied())?);
    let right = second_home.union(&VertexSet::new(to_second.iter().copied())?);
    Bisection::new(g, left, right)
}

/// Uncut and cut weight of a bisection, split into red pairs (both ends in
/// the same one of `A`, `B`, `C`) and blue pairs (ends in different sets).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ColoredWeights {
    pub red_uncut: f64,
    pub red_cut: f64,
    pub blue_uncut: f64,
    pub blue_cut: f64,
}

pub fn colored_weights(
    g: &SimilarityGraph,
    d: &ThreeSetDecomposition,
    bisection: &Bisection,
) -> ColoredWeights {
    let n = g.n();
    let mut part = vec![0u8; n];
    for &v in &d.b {
        part[v] = 1;
    }
    for &v in &d.c {
        part[v] = 2;
    }
    let mut left = vec![false; n];
    for &v in bisection.left() {
        left[v] = true;
    }
    let mut out = ColoredWeights::default();
    for (i, j, w) in g.pairs() {
        let slot = match (part[i] == part[j], left[i] == left[j]) {
            (true, true) => &mut out.red_uncut,
            (true, false) => &mut out.red_cut,
            (false, true) => &mut out.blue_uncut,
            (false, false) => &mut out.blue_cut,
        };
        *slot += w;
    }
    out
}

/// Approximation factor `4ρ / (3 (2ρ + 1))` of the pipeline given a
/// `ρ`-approximate bisection solver.
pub fn approx_constant(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::OutOfRange {
            name: "rho",
            value: rho,
        });
    }
    Ok(4.0 * rho / (3.0 * (2.0 * rho + 1.0)))
}
