//! Monte Carlo estimates for the randomized balanced cut.
//!
//! Trial `t` runs the randomized bisection with seed `base + t`; means and
//! standard errors are accumulated in trial order, so results do not depend
//! on the thread count.

use rayon::prelude::*;
use serde::Serialize;

use hc_core::analysis::{
    bisection_coefficients, colored_weights, delta_max, randomized_bisection,
    ThreeSetDecomposition,
};
use hc_core::SimilarityGraph;

/// Sample mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    fn from_samples(xs: &[f64]) -> Estimate {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error: (var / n).sqrt(),
        }
    }

    /// `mean - k * std_error`.
    pub fn lower(&self, k: f64) -> f64 {
        self.mean - k * self.std_error
    }

    /// Whether `value` lies within `k` standard errors of the mean; exact
    /// agreement is required when the sample has no spread.
    pub fn covers(&self, value: f64, k: f64) -> bool {
        let slack = (k * self.std_error).max(1e-9 * value.abs().max(1e-12));
        (self.mean - value).abs() <= slack
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisectionStudy {
    pub trials: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Cut probability of a red pair; zero for degenerate decompositions,
    /// whose bisection is deterministic and cuts no red pair.
    pub delta: f64,
    pub delta_max: f64,
    pub red_uncut: Estimate,
    pub blue_uncut: Estimate,
    pub total_uncut: Estimate,
}

impl BisectionStudy {
    /// Expected uncut red weight, `(1 - delta) alpha`.
    pub fn predicted_red_uncut(&self) -> f64 {
        (1.0 - self.delta) * self.alpha
    }

    /// Lower bound on the expected uncut blue weight, `delta beta`.
    pub fn predicted_blue_lower(&self) -> f64 {
        self.delta * self.beta
    }
}

/// Runs `trials` randomized bisections and estimates red and blue uncut
/// weights.
pub fn study_bisection(
    g: &SimilarityGraph,
    d: &ThreeSetDecomposition,
    trials: usize,
    seed: u64,
) -> Result<BisectionStudy, hc_core::Error> {
    if trials == 0 {
        return Err(hc_core::Error::OutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    let samples: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let b = randomized_bisection(g, d, seed.wrapping_add(t as u64))?;
            let cw = colored_weights(g, d, &b);
            Ok((cw.red_uncut, cw.blue_uncut))
        })
        .collect::<Result<_, hc_core::Error>>()?;
    let red: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let blue: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let total: Vec<f64> = samples.iter().map(|s| s.0 + s.1).collect();
    Ok(BisectionStudy {
        trials,
        alpha: d.alpha,
        beta: d.beta,
        delta: bisection_coefficients(d).map_or(0.0, |k| k.delta),
        delta_max: delta_max(d.c_fraction())?,
        red_uncut: Estimate::from_samples(&red),
        blue_uncut: Estimate::from_samples(&blue),
        total_uncut: Estimate::from_samples(&total),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hc_core::VertexSet;

    #[test]
    fn estimate_of_constant_samples() {
        let e = Estimate::from_samples(&[2.0, 2.0, 2.0]);
        assert_eq!(e.mean, 2.0);
        assert_eq!(e.std_error, 0.0);
        assert!(e.covers(2.0, 4.0));
        assert!(!e.covers(2.1, 4.0));
    }

    #[test]
    fn estimate_standard_error() {
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        // sample variance 5/3, divided by n = 4
        assert!((e.std_error - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_study_is_deterministic() {
        let g = SimilarityGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let set = |v: &[usize]| VertexSet::new(v.iter().copied()).unwrap();
        let d = ThreeSetDecomposition::new(&g, set(&[0, 1]), set(&[2]), set(&[3])).unwrap();
        let s = study_bisection(&g, &d, 50, 3).unwrap();
        assert_eq!(s.delta, 0.0);
        assert_eq!(s.red_uncut.mean, 1.0);
        assert_eq!(s.red_uncut.std_error, 0.0);
        assert_eq!(s.blue_uncut.mean, 1.0);
        assert!(study_bisection(&g, &d, 0, 3).is_err());
    }
}
