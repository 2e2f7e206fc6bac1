//! On-disk formats: dataset CSV, result JSON, and metrics JSON.
//!
//! Dataset CSV: a header `x0,...,x{d-1}` optionally followed by `label`,
//! then one row per point. Floats are written in the shortest form that
//! parses back to the identical `f64`, so files are lossless.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::eval::{ContingencyTable, Evaluation};
use crate::geometry::{Dataset, LabeledDataset};
use crate::meanshift::{ClusteringResult, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// A dataset read from CSV, with its label column when present.
#[derive(Debug, Clone)]
pub struct CsvDataset {
    pub data: Dataset,
    pub labels: Option<Vec<i64>>,
}

impl CsvDataset {
    /// Ground-truth view; requires a label column.
    pub fn labeled(&self, path: &Path) -> Result<LabeledDataset, CliError> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| CliError::Data(format!("{}: no `label` column", path.display())))?;
        Ok(LabeledDataset::from_raw_labels(self.data.clone(), labels)?)
    }
}

pub fn read_dataset(path: &Path) -> Result<CsvDataset, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_dataset(&text).map_err(|msg| CliError::Data(format!("{}: {msg}", path.display())))
}

pub fn parse_dataset(text: &str) -> Result<CsvDataset, String> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    let mut dim = 0;
    let mut has_label = false;
    for (i, name) in header.iter().enumerate() {
        if name == "label" && i + 1 == header.len() {
            has_label = true;
        } else if name == format!("x{i}") {
            dim += 1;
        } else {
            return Err(format!("unexpected header column `{name}` at position {i}"));
        }
    }
    if dim == 0 {
        return Err("header declares no coordinate columns".into());
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let row: Vec<f64> = record
            .iter()
            .take(dim)
            .map(|f| f.parse::<f64>().map_err(|e| format!("row {}: `{f}`: {e}", line + 1)))
            .collect::<Result<_, _>>()?;
        rows.push(row);
        if has_label {
            let f = &record[dim];
            labels.push(f.parse::<i64>().map_err(|e| format!("row {}: label `{f}`: {e}", line + 1))?);
        }
    }
    let data = Dataset::from_rows(rows).map_err(|e| e.to_string())?;
    Ok(CsvDataset { data, labels: has_label.then_some(labels) })
}

pub fn format_dataset(data: &Dataset, labels: Option<&[usize]>) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..data.dim()).map(|k| format!("x{k}")).collect();
    out.push_str(&header.join(","));
    if labels.is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    for (i, p) in data.points().iter().enumerate() {
        for (k, c) in p.coords().iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(out, "{c:?}").expect("writing to a String cannot fail");
        }
        if let Some(labels) = labels {
            write!(out, ",{}", labels[i]).expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[value(name = "det")]
    #[serde(rename = "det")]
    Deterministic,
    #[value(name = "stoch")]
    #[serde(rename = "stoch")]
    Stochastic,
}

impl Algorithm {
    pub fn run(self, data: &Dataset, config: &RunConfig) -> crate::Result<ClusteringResult> {
        match self {
            Algorithm::Deterministic => crate::cluster_deterministic(data, config),
            Algorithm::Stochastic => crate::cluster_stochastic(data, config),
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Algorithm::Deterministic => "D",
            Algorithm::Stochastic => "S",
        }
    }
}

/// `cluster` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub schema: u32,
    pub algorithm: Algorithm,
    pub config: RunConfig,
    pub num_points: usize,
    pub dim: usize,
    pub num_clusters: usize,
    #[serde(flatten)]
    pub result: ClusteringResult,
}

impl ResultFile {
    pub fn new(algorithm: Algorithm, config: RunConfig, data: &Dataset, result: ClusteringResult) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            algorithm,
            config,
            num_points: data.len(),
            dim: data.dim(),
            num_clusters: result.num_clusters(),
            result,
        }
    }
}

/// `evaluate` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsFile {
    pub schema: u32,
    pub acp: f64,
    pub asp: f64,
    pub k: f64,
    pub pur_c: f64,
    pub pur_d: f64,
    pub g: f64,
    pub num_clusters: usize,
    pub num_classes: usize,
    pub cluster_purities: Vec<f64>,
    pub class_purities: Vec<f64>,
    pub contingency: ContingencyTable,
}

impl From<Evaluation> for MetricsFile {
    fn from(e: Evaluation) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            acp: e.k.acp,
            asp: e.k.asp,
            k: e.k.k,
            pur_c: e.g.pur_c,
            pur_d: e.g.pur_d,
            g: e.g.g,
            num_clusters: e.table.num_clusters(),
            num_classes: e.table.num_classes(),
            cluster_purities: e.k.cluster_purities,
            class_purities: e.k.class_purities,
            contingency: e.table,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
