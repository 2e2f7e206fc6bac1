//! Benchmark sweeps over the built-in sets, algorithms, and seeds.
//!
//! Each cell samples the set with the cell's seed, clusters it with the
//! set's hyperparameters (the same seed drives the stochastic engine), and
//! scores the result against the ground truth. Cells are independent and may
//! run in parallel; the report is always assembled in cell order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::files::{Algorithm, SCHEMA_VERSION};
use super::CliError;
use crate::eval::evaluate;
use crate::meanshift::{ClusteringResult, RunConfig};
use crate::synth::{builtin_set, sample_mixture};

/// Hyperparameters shipped with the crate.
pub const SHIPPED_CONFIG: &str = include_str!("../../configs/bench.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchDefaults {
    pub th1: f64,
    #[serde(default)]
    pub max_inner_iters: Option<usize>,
    #[serde(default)]
    pub global_iter_budget: Option<usize>,
    #[serde(default)]
    pub stagnation_window: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetParams {
    pub id: u32,
    pub h: f64,
    pub th2: f64,
    #[serde(default)]
    pub th1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub defaults: BenchDefaults,
    #[serde(rename = "set")]
    pub sets: Vec<SetParams>,
}

impl BenchConfig {
    pub fn shipped() -> Self {
        Self::from_toml(SHIPPED_CONFIG).expect("shipped bench config parses")
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Data(format!("bench config: {e}")))
    }

    /// Run configuration for `set` with the given seed.
    pub fn run_config(&self, set: u32, seed: u64) -> Result<RunConfig, CliError> {
        let params = self
            .sets
            .iter()
            .find(|s| s.id == set)
            .ok_or_else(|| CliError::Data(format!("bench config has no entry for set {set}")))?;
        let mut config = RunConfig::new(params.h, params.th1.unwrap_or(self.defaults.th1), params.th2).with_seed(seed);
        if let Some(cap) = self.defaults.max_inner_iters {
            config.max_inner_iters = cap;
        }
        config.global_iter_budget = self.defaults.global_iter_budget;
        config.stagnation_window = self.defaults.stagnation_window;
        config.validate()?;
        Ok(config)
    }
}

/// What to sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub sets: Vec<u32>,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub set: u32,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub acp: f64,
    pub asp: f64,
    pub k: f64,
    pub pur_c: f64,
    pub pur_d: f64,
    pub g: f64,
    pub num_clusters: usize,
    pub shift_count: u64,
    pub wall_ms: f64,
    /// SHA-256 of the serialized clustering result.
    pub result_digest: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let mut v: Vec<f64> = values.into_iter().collect();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 };
        Spread { median, min: v[0], max: v[n - 1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub acp: Spread,
    pub asp: Spread,
    pub k: Spread,
    pub pur_c: Spread,
    pub pur_d: Spread,
    pub g: Spread,
    pub num_clusters: Spread,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetSummary {
    pub set: u32,
    pub algorithms: Vec<AlgorithmSummary>,
    /// Algorithm with the higher median K (`None` on a tie or single algorithm).
    pub best_k: Option<Algorithm>,
    pub best_g: Option<Algorithm>,
}

impl SetSummary {
    pub fn algorithm(&self, algorithm: Algorithm) -> Option<&AlgorithmSummary> {
        self.algorithms.iter().find(|a| a.algorithm == algorithm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema: u32,
    pub config: BenchConfig,
    pub runs: Vec<RunRecord>,
    pub summaries: Vec<SetSummary>,
}

impl BenchReport {
    pub fn summary(&self, set: u32) -> Option<&SetSummary> {
        self.summaries.iter().find(|s| s.set == set)
    }
}

pub fn result_digest(result: &ClusteringResult) -> String {
    let bytes = serde_json::to_vec(result).expect("clustering results serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs one `(set, algorithm, seed)` cell.
pub fn run_cell(config: &BenchConfig, set: u32, algorithm: Algorithm, seed: u64) -> Result<(ClusteringResult, RunRecord), CliError> {
    let spec = builtin_set(set)?;
    let data = sample_mixture(&spec, seed)?;
    let run_config = config.run_config(set, seed)?;
    let started = Instant::now();
    let result = algorithm.run(data.data(), &run_config)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let e = evaluate(&result.assignments, data.labels())?;
    let record = RunRecord {
        set,
        algorithm,
        seed,
        acp: e.k.acp,
        asp: e.k.asp,
        k: e.k.k,
        pur_c: e.g.pur_c,
        pur_d: e.g.pur_d,
        g: e.g.g,
        num_clusters: result.num_clusters(),
        shift_count: result.shift_count,
        wall_ms,
        result_digest: result_digest(&result),
    };
    Ok((result, record))
}

pub fn run_bench(config: &BenchConfig, plan: &BenchPlan) -> Result<BenchReport, CliError> {
    let cells: Vec<(u32, Algorithm, u64)> = plan
        .sets
        .iter()
        .flat_map(|&s| plan.algorithms.iter().flat_map(move |&a| plan.seeds.iter().map(move |&seed| (s, a, seed))))
        .collect();
    let run = |&(s, a, seed): &(u32, Algorithm, u64)| run_cell(config, s, a, seed).map(|(_, r)| r);
    let runs: Vec<RunRecord> = if plan.parallel {
        cells.par_iter().map(run).collect::<Result<_, _>>()?
    } else {
        cells.iter().map(run).collect::<Result<_, _>>()?
    };
    let summaries = summarize(&plan.sets, &plan.algorithms, &runs);
    Ok(BenchReport { schema: SCHEMA_VERSION, config: config.clone(), runs, summaries })
}

fn summarize(sets: &[u32], algorithms: &[Algorithm], runs: &[RunRecord]) -> Vec<SetSummary> {
    sets.iter()
        .map(|&set| {
            let algos: Vec<AlgorithmSummary> = algorithms
                .iter()
                .map(|&algorithm| {
                    let rs: Vec<&RunRecord> = runs.iter().filter(|r| r.set == set && r.algorithm == algorithm).collect();
                    let spread = |f: fn(&RunRecord) -> f64| Spread::of(rs.iter().map(|r| f(r)));
                    AlgorithmSummary {
                        algorithm,
                        runs: rs.len(),
                        acp: spread(|r| r.acp),
                        asp: spread(|r| r.asp),
                        k: spread(|r| r.k),
                        pur_c: spread(|r| r.pur_c),
                        pur_d: spread(|r| r.pur_d),
                        g: spread(|r| r.g),
                        num_clusters: spread(|r| r.num_clusters as f64),
                    }
                })
                .collect();
            let best = |f: fn(&AlgorithmSummary) -> f64| {
                let mut ranked: Vec<&AlgorithmSummary> = algos.iter().collect();
                ranked.sort_by(|a, b| f(b).total_cmp(&f(a)));
                match ranked.as_slice() {
                    [first, second, ..] if f(first) > f(second) => Some(first.algorithm),
                    _ => None,
                }
            };
            SetSummary { set, best_k: best(|a| a.k.median), best_g: best(|a| a.g.median), algorithms: algos }
        })
        .collect()
}

/// Aligned-text rendering: one table per set (medians, two decimals) and a
/// summary of K and G per set with the better median starred.
pub fn render_tables(report: &BenchReport) -> String {
    let mut out = String::new();
    for s in &report.summaries {
        let runs = s.algorithms.first().map_or(0, |a| a.runs);
        writeln!(out, "Set {} (median of {} seeds)", s.set, runs).unwrap();
        writeln!(out, "      {:>5} {:>5} {:>5} | {:>5} {:>5} {:>5} | {:>9}", "ACP", "ASP", "K", "Pur_C", "Pur_D", "G", "#Clusters").unwrap();
        for a in &s.algorithms {
            writeln!(
                out,
                "  {:<3} {:>5.2} {:>5.2} {:>5.2} | {:>5.2} {:>5.2} {:>5.2} | {:>9}",
                a.algorithm.short(),
                a.acp.median,
                a.asp.median,
                a.k.median,
                a.pur_c.median,
                a.pur_d.median,
                a.g.median,
                a.num_clusters.median
            )
            .unwrap();
        }
        out.push('\n');
    }

    let algorithms: Vec<Algorithm> = report.summaries.first().map(|s| s.algorithms.iter().map(|a| a.algorithm).collect()).unwrap_or_default();
    writeln!(out, "Summary (* marks the better median)").unwrap();
    let mut header = String::from("     ");
    for s in &report.summaries {
        for a in &algorithms {
            write!(header, " {:>7}", format!("{}{}", s.set, a.short())).unwrap();
        }
    }
    writeln!(out, "{header}").unwrap();
    let metric_rows: [(&str, fn(&AlgorithmSummary) -> f64, fn(&SetSummary) -> Option<Algorithm>); 2] =
        [("K", |a| a.k.median, |s| s.best_k), ("G", |a| a.g.median, |s| s.best_g)];
    for (name, value, best) in metric_rows {
        let mut line = format!("  {name:<3}");
        for s in &report.summaries {
            for a in &s.algorithms {
                let mark = if best(s) == Some(a.algorithm) { "*" } else { "" };
                write!(line, " {:>7}", format!("{:.2}{mark}", value(a))).unwrap();
            }
        }
        writeln!(out, "{line}").unwrap();
    }
    out
}

/// `"1-3,5"` → `[1, 2, 3, 5]`.
pub fn parse_set_list(text: &str) -> Result<Vec<u32>, CliError> {
    let mut sets = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || CliError::Usage(format!("invalid set list entry `{part}`"));
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                sets.extend(a..=b);
            }
            None => sets.push(part.parse().map_err(|_| bad())?),
        }
    }
    if sets.is_empty() {
        return Err(CliError::Usage("empty set list".into()));
    }
    if let Some(s) = sets.iter().find(|&&s| s == 0 || s > crate::synth::BUILTIN_SETS) {
        return Err(CliError::Usage(format!("unknown built-in set {s}; valid ids are 1..={}", crate::synth::BUILTIN_SETS)));
    }
    let mut seen = BTreeMap::new();
    sets.retain(|s| seen.insert(*s, ()).is_none());
    Ok(sets)
}
