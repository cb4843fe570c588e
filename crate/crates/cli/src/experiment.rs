//! Experiment configs, per-instance records and summaries.
//!
//! A config is TOML: global settings followed by one `[[instances]]` block
//! per generator spec.
//!
//! ```toml
//! seed = 7
//! algorithms = ["avg-link", "hc-exact", "hc-local", "hc-recursive"]
//! oracle = true
//! restarts = 20
//! recursive_depth = 2
//!
//! [[instances]]
//! generator = "gnp"
//! n = 8
//! p = 0.5
//! count = 10
//! ```
//!
//! Instances are numbered across blocks in order; instance `i` is generated
//! with seed `seed + i` (or the block's own `seed + k` for its `k`-th
//! instance), and that seed also drives local search.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use hc_core::generate::{generate, Generator, PLANTED_GAMMA, PLANTED_NOISE};
use hc_core::linkage::average_linkage;
use hc_core::mub::{ExactMub, LocalSearchMub, EXACT_MUB_LIMIT};
use hc_core::oracle::{opt_dp, DP_LIMIT};
use hc_core::pipeline::{hc_via_mub, hc_via_mub_recursive};
use hc_core::SimilarityGraph;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error("instance {id}: {source}")]
    Instance {
        id: usize,
        #[source]
        source: hc_core::Error,
    },
    #[error("summary: {0}")]
    Summary(&'static str),
}

fn config_error(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Config(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Average-Linkage on the whole graph.
    AvgLink,
    /// Exact bisection at the root, Average-Linkage below.
    HcExact,
    /// Local-search bisection at the root, Average-Linkage below.
    HcLocal,
    /// Local-search bisection applied recursively to `recursive_depth`.
    HcRecursive,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::AvgLink,
        Algorithm::HcExact,
        Algorithm::HcLocal,
        Algorithm::HcRecursive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::AvgLink => "avg-link",
            Algorithm::HcExact => "hc-exact",
            Algorithm::HcLocal => "hc-local",
            Algorithm::HcRecursive => "hc-recursive",
        }
    }
}

fn default_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}

fn default_true() -> bool {
    true
}

fn default_restarts() -> usize {
    20
}

fn default_depth() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_true")]
    pub oracle: bool,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_depth")]
    pub recursive_depth: usize,
    /// Record wall-clock times; off by default since they break replay.
    #[serde(default)]
    pub timings: bool,
    pub instances: Vec<InstanceSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub generator: String,
    pub n: usize,
    #[serde(default = "one")]
    pub count: usize,
    pub seed: Option<u64>,
    pub p: Option<f64>,
    pub gamma: Option<f64>,
    pub noise: Option<f64>,
    pub epsilon: Option<f64>,
}

fn one() -> usize {
    1
}

impl InstanceSpec {
    pub fn generator(&self) -> Result<Generator, ExperimentError> {
        let unused = |name: &str, v: Option<f64>| match v {
            Some(_) => Err(config_error(format!(
                "parameter '{name}' does not apply to generator '{}'",
                self.generator
            ))),
            None => Ok(()),
        };
        let kind = match self.generator.as_str() {
            "gnp" => {
                unused("gamma", self.gamma)?;
                unused("noise", self.noise)?;
                unused("epsilon", self.epsilon)?;
                Generator::Gnp {
                    p: self.p.ok_or_else(|| config_error("gnp needs 'p'"))?,
                }
            }
            "uniform" => {
                unused("p", self.p)?;
                unused("gamma", self.gamma)?;
                unused("noise", self.noise)?;
                unused("epsilon", self.epsilon)?;
                Generator::Uniform
            }
            "planted-hierarchy" => {
                unused("p", self.p)?;
                unused("epsilon", self.epsilon)?;
                Generator::PlantedHierarchy {
                    gamma: self.gamma.unwrap_or(PLANTED_GAMMA),
                    noise: self.noise.unwrap_or(PLANTED_NOISE),
                }
            }
            "two-cliques" => {
                unused("p", self.p)?;
                unused("gamma", self.gamma)?;
                unused("noise", self.noise)?;
                Generator::TwoCliques {
                    epsilon: self.epsilon.unwrap_or(0.0),
                }
            }
            other => return Err(config_error(format!("unknown generator '{other}'"))),
        };
        // surface parameter range errors at parse time
        generate(&kind, 1, 0).map_err(|e| config_error(e.to_string()))?;
        Ok(kind)
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| config_error(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.instances.is_empty() {
            return Err(config_error("no [[instances]] blocks"));
        }
        if self.algorithms.is_empty() {
            return Err(config_error("no algorithms selected"));
        }
        if self.restarts == 0 {
            return Err(config_error("restarts must be positive"));
        }
        for spec in &self.instances {
            spec.generator()?;
            if spec.n < 2 {
                return Err(config_error(format!("n = {} is below 2", spec.n)));
            }
            if self.oracle && spec.n > DP_LIMIT {
                return Err(config_error(format!(
                    "oracle limit exceeded: n = {} > {DP_LIMIT}",
                    spec.n
                )));
            }
            if self.algorithms.contains(&Algorithm::HcExact) && spec.n > EXACT_MUB_LIMIT {
                return Err(config_error(format!(
                    "exact bisection limit exceeded: n = {} > {EXACT_MUB_LIMIT}",
                    spec.n
                )));
            }
        }
        Ok(())
    }

    /// `(id, generator, n, seed)` of every instance, in id order.
    fn plan(&self) -> Vec<(usize, &InstanceSpec, Generator, u64)> {
        let mut out = Vec::new();
        for spec in &self.instances {
            let kind = spec.generator().expect("validated");
            for k in 0..spec.count {
                let id = out.len();
                let seed = match spec.seed {
                    Some(s) => s.wrapping_add(k as u64),
                    None => self.seed.wrapping_add(id as u64),
                };
                out.push((id, spec, kind, seed));
            }
        }
        out
    }
}

/// One instance's results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub id: usize,
    pub n: usize,
    pub total_weight: f64,
    pub generator: String,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    /// Objective value per algorithm name.
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt: Option<f64>,
    /// `value / opt`; 1 when `opt` is 0, absent without the oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratios: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times_ms: Option<BTreeMap<String, f64>>,
}

impl ExperimentRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

fn params_of(kind: &Generator) -> BTreeMap<String, f64> {
    let pairs: Vec<(&str, f64)> = match *kind {
        Generator::Gnp { p } => vec![("p", p)],
        Generator::Uniform => vec![],
        Generator::PlantedHierarchy { gamma, noise } => vec![("gamma", gamma), ("noise", noise)],
        Generator::TwoCliques { epsilon } => vec![("epsilon", epsilon)],
    };
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn run_instance(
    config: &ExperimentConfig,
    id: usize,
    n: usize,
    kind: Generator,
    seed: u64,
) -> Result<ExperimentRecord, hc_core::Error> {
    let g = generate(&kind, n, seed)?;
    let mut values = BTreeMap::new();
    let mut times = BTreeMap::new();
    let local = LocalSearchMub::new(seed, config.restarts);
    for &alg in &config.algorithms {
        let start = Instant::now();
        let tree = match alg {
            Algorithm::AvgLink => average_linkage(&g, None)?,
            Algorithm::HcExact => hc_via_mub(&g, &ExactMub::default())?,
            Algorithm::HcLocal => hc_via_mub(&g, &local)?,
            Algorithm::HcRecursive => hc_via_mub_recursive(&g, &local, config.recursive_depth)?,
        };
        let value = tree.mw_objective(&g)?;
        times.insert(alg.name().to_string(), start.elapsed().as_secs_f64() * 1e3);
        values.insert(alg.name().to_string(), value);
    }
    let (opt, ratios) = if config.oracle {
        let start = Instant::now();
        let opt = opt_dp(&g)?.value;
        times.insert("opt".to_string(), start.elapsed().as_secs_f64() * 1e3);
        let ratios = values
            .iter()
            .map(|(k, &v)| (k.clone(), ratio(v, opt)))
            .collect();
        (Some(opt), Some(ratios))
    } else {
        (None, None)
    };
    Ok(ExperimentRecord {
        id,
        n,
        total_weight: g.total_weight(),
        generator: kind.name().to_string(),
        params: params_of(&kind),
        seed,
        values,
        opt,
        ratios,
        times_ms: config.timings.then_some(times),
    })
}

fn ratio(value: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        value / opt
    } else {
        1.0
    }
}

/// Number of instances solved in parallel before their records are emitted.
const BATCH: usize = 64;

/// Runs every instance and hands records to `sink` in id order as batches
/// finish.
pub fn run_experiment_with<F>(config: &ExperimentConfig, mut sink: F) -> Result<(), ExperimentError>
where
    F: FnMut(ExperimentRecord),
{
    config.validate()?;
    let plan = config.plan();
    for batch in plan.chunks(BATCH) {
        let records: Vec<ExperimentRecord> = batch
            .par_iter()
            .map(|&(id, spec, kind, seed)| {
                run_instance(config, id, spec.n, kind, seed)
                    .map_err(|source| ExperimentError::Instance { id, source })
            })
            .collect::<Result<_, _>>()?;
        records.into_iter().for_each(&mut sink);
    }
    Ok(())
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let mut out = Vec::new();
    run_experiment_with(config, |r| out.push(r))?;
    Ok(out)
}

/// Ratio statistics of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub instances: usize,
    pub min: f64,
    pub mean: f64,
    pub median: f64,
    /// Share of instances where this algorithm scores strictly above
    /// Average-Linkage; absent for Average-Linkage itself or without it.
    pub beats_avg_link: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rows: Vec<AlgorithmSummary>,
}

/// Per-algorithm min/mean/median ratio to the optimum.
pub fn summarize(records: &[ExperimentRecord]) -> Result<Summary, ExperimentError> {
    if records.is_empty() {
        return Err(ExperimentError::Summary("no records"));
    }
    if records.iter().any(|r| r.ratios.is_none()) {
        return Err(ExperimentError::Summary("records without ratios (oracle was off)"));
    }
    let mut per_alg: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut beats: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in records {
        for (alg, &x) in r.ratios.as_ref().expect("checked") {
            per_alg.entry(alg).or_default().push(x);
        }
        if let Some(&base) = r.values.get(Algorithm::AvgLink.name()) {
            for (alg, &v) in r.values.iter().filter(|(k, _)| *k != Algorithm::AvgLink.name()) {
                let e = beats.entry(alg).or_default();
                e.0 += (v > base) as usize;
                e.1 += 1;
            }
        }
    }
    let rows = per_alg
        .into_iter()
        .map(|(alg, mut xs)| {
            xs.sort_by(f64::total_cmp);
            let k = xs.len();
            let median = if k % 2 == 1 {
                xs[k / 2]
            } else {
                (xs[k / 2 - 1] + xs[k / 2]) / 2.0
            };
            AlgorithmSummary {
                algorithm: alg.to_string(),
                instances: k,
                min: xs[0],
                mean: xs.iter().sum::<f64>() / k as f64,
                median,
                beats_avg_link: beats.get(alg).map(|&(w, t)| w as f64 / t as f64),
            }
        })
        .collect();
    Ok(Summary { rows })
}

impl Summary {
    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:>9} {:>8} {:>8} {:>8} {:>14}",
            "algorithm", "instances", "min", "mean", "median", "beats-avg-link"
        );
        for row in &self.rows {
            let beats = row
                .beats_avg_link
                .map_or_else(|| "-".to_string(), |b| format!("{b:.4}"));
            let _ = writeln!(
                out,
                "{:<14} {:>9} {:>8.4} {:>8.4} {:>8.4} {:>14}",
                row.algorithm, row.instances, row.min, row.mean, row.median, beats
            );
        }
        out
    }
}

/// Parses line-delimited JSON records, skipping blank lines.
pub fn parse_records(text: &str) -> Result<Vec<ExperimentRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

/// Weighted graph of an instance spec, for reproducing a single record.
pub fn instance_graph(record: &ExperimentRecord) -> Result<SimilarityGraph, ExperimentError> {
    let spec = InstanceSpec {
        generator: record.generator.clone(),
        n: record.n,
        count: 1,
        seed: None,
        p: record.params.get("p").copied(),
        gamma: record.params.get("gamma").copied(),
        noise: record.params.get("noise").copied(),
        epsilon: record.params.get("epsilon").copied(),
    };
    let kind = spec.generator()?;
    generate(&kind, record.n, record.seed).map_err(|source| ExperimentError::Instance {
        id: record.id,
        source,
    })
}
