//! Seeded instance generators.
//!
//! Every generator draws from ChaCha8 seeded with the given `u64`, so the same
//! `(generator, n, seed)` always yields the same graph.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::SimilarityGraph;
use crate::tree::{HCTree, TreeBuilder};
use crate::{Error, Result};

/// Default decay of the planted hierarchy.
pub const PLANTED_GAMMA: f64 = 0.5;
/// Default noise amplitude of the planted hierarchy.
pub const PLANTED_NOISE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    /// 0-1 weights, each pair present with probability `p`.
    Gnp { p: f64 },
    /// Weights uniform in `[0, 1)`.
    Uniform,
    /// Balanced binary ground truth; a pair whose lowest common block has
    /// height `h` gets `gamma^(h-1)` plus uniform noise in `[-noise, noise]`,
    /// clamped at zero.
    PlantedHierarchy { gamma: f64, noise: f64 },
    /// Unit cliques on the first `⌈n/2⌉` and the last `⌊n/2⌋` vertices,
    /// `epsilon` between them.
    TwoCliques { epsilon: f64 },
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Gnp { .. } => "gnp",
            Generator::Uniform => "uniform",
            Generator::PlantedHierarchy { .. } => "planted-hierarchy",
            Generator::TwoCliques { .. } => "two-cliques",
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |name, value| Err(Error::OutOfRange { name, value });
        match *self {
            Generator::Gnp { p } if !(0.0..=1.0).contains(&p) => bad("p", p),
            Generator::PlantedHierarchy { gamma, .. } if !(gamma > 0.0 && gamma <= 1.0) => {
                bad("gamma", gamma)
            }
            Generator::PlantedHierarchy { noise, .. } if !(noise >= 0.0 && noise.is_finite()) => {
                bad("noise", noise)
            }
            Generator::TwoCliques { epsilon } if !(epsilon >= 0.0 && epsilon.is_finite()) => {
                bad("epsilon", epsilon)
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Gnp { p } => write!(f, "gnp(p={p})"),
            Generator::Uniform => f.write_str("uniform"),
            Generator::PlantedHierarchy { gamma, noise } => {
                write!(f, "planted-hierarchy(gamma={gamma},noise={noise})")
            }
            Generator::TwoCliques { epsilon } => write!(f, "two-cliques(epsilon={epsilon})"),
        }
    }
}

/// Draws an `n`-vertex instance of `kind`.
pub fn generate(kind: &Generator, n: usize, seed: u64) -> Result<SimilarityGraph> {
    kind.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *kind {
        Generator::Gnp { p } => SimilarityGraph::from_fn(n, |_, _| {
            if rng.random::<f64>() < p {
                1.0
            } else {
                0.0
            }
        }),
        Generator::Uniform => SimilarityGraph::from_fn(n, |_, _| rng.random::<f64>()),
        Generator::PlantedHierarchy { gamma, noise } => SimilarityGraph::from_fn(n, |i, j| {
            let h = block_height(n, i, j);
            let jitter = if noise > 0.0 {
                rng.random_range(-noise..=noise)
            } else {
                0.0
            };
            (pow(gamma, h - 1) + jitter).max(0.0)
        }),
        Generator::TwoCliques { epsilon } => {
            let half = n.div_ceil(2);
            SimilarityGraph::from_fn(n, |i, j| if (i < half) == (j < half) { 1.0 } else { epsilon })
        }
    }
}

fn pow(base: f64, exp: u32) -> f64 {
    (0..exp).fold(1.0, |acc, _| acc * base)
}

/// Height of the smallest block containing `i` and `j` when `0..n` is halved
/// recursively (`[lo, mid)`, `[mid, hi)` with `mid = lo + ⌈len/2⌉`); a block
/// of size `s` has height `⌈log2 s⌉`.
fn block_height(n: usize, i: usize, j: usize) -> u32 {
    let (mut lo, mut hi) = (0, n);
    loop {
        let mid = lo + (hi - lo).div_ceil(2);
        if i < mid && j < mid {
            hi = mid;
        } else if i >= mid && j >= mid {
            lo = mid;
        } else {
            return (hi - lo).next_power_of_two().trailing_zeros();
        }
    }
}

/// A uniformly random sequence of merges over `leaves`.
pub fn random_tree<R: Rng + ?Sized>(leaves: &[usize], rng: &mut R) -> Result<HCTree> {
    if leaves.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut b = TreeBuilder::with_capacity(leaves.len());
    let mut roots: Vec<_> = leaves.iter().map(|&v| b.leaf(v)).collect();
    while roots.len() > 1 {
        let x = rng.random_range(0..roots.len());
        let left = roots.swap_remove(x);
        let y = rng.random_range(0..roots.len());
        let right = roots[y];
        roots[y] = b.join(left, right);
    }
    b.finish(roots[0])
}
