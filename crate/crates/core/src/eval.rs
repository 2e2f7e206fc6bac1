//! External clustering evaluation against ground-truth classes.
//!
//! Two criteria are computed from the cluster-by-class contingency table:
//!
//! * **G**, the geometric mean of cluster purity `Pur_C` (share of points in
//!   the majority class of their cluster) and class purity `Pur_D` (share of
//!   points in the majority cluster of their class).
//! * **K**, the geometric mean of the average cluster purity `ACP` and the
//!   average class purity `ASP`, where each purity is the sum of squared
//!   proportions over the row (or column). ACP and ASP are unweighted means,
//!   so small clusters and classes count as much as large ones.
//!
//! A purity `Σ p_i²` equals `1 − Gini(p)` for the multi-class Gini impurity,
//! see [`multiclass_gini`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::dense_label_count;

/// Tolerance on the total mass accepted by [`multiclass_gini`].
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Counts `n_qr` of points in cluster `q` with true class `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub cluster_totals: Vec<u64>,
    pub class_totals: Vec<u64>,
    pub total: u64,
}

impl ContingencyTable {
    /// Builds a table from explicit counts, rejecting empty rows or columns.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let classes = counts.first().ok_or(Error::Empty("contingency table"))?.len();
        if classes == 0 {
            return Err(Error::Empty("contingency table row"));
        }
        if let Some(row) = counts.iter().find(|r| r.len() != classes) {
            return Err(Error::DimensionMismatch { expected: classes, found: row.len() });
        }
        let cluster_totals: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
        let class_totals: Vec<u64> = (0..classes).map(|r| counts.iter().map(|row| row[r]).sum()).collect();
        if let Some(missing) = cluster_totals.iter().position(|&t| t == 0) {
            return Err(Error::SparseLabels { missing, count: cluster_totals.len() });
        }
        if let Some(missing) = class_totals.iter().position(|&t| t == 0) {
            return Err(Error::SparseLabels { missing, count: classes });
        }
        let total = cluster_totals.iter().sum();
        Ok(Self { counts, cluster_totals, class_totals, total })
    }

    pub fn num_clusters(&self) -> usize {
        self.counts.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_totals.len()
    }
}

/// Tallies predicted cluster ids against true class ids. Both label sets must be dense.
pub fn build_contingency(predicted: &[usize], truth: &[usize]) -> Result<ContingencyTable> {
    if predicted.len() != truth.len() {
        return Err(Error::LengthMismatch { left: predicted.len(), right: truth.len() });
    }
    if predicted.is_empty() {
        return Err(Error::Empty("label lists"));
    }
    let q = dense_label_count(predicted)?;
    let r = dense_label_count(truth)?;
    let mut counts = vec![vec![0u64; r]; q];
    for (&c, &t) in predicted.iter().zip(truth) {
        counts[c][t] += 1;
    }
    ContingencyTable::from_counts(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GScores {
    pub pur_c: f64,
    pub pur_d: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KScores {
    pub acp: f64,
    pub asp: f64,
    pub k: f64,
    /// `p_q.` per cluster.
    pub cluster_purities: Vec<f64>,
    /// `p_.r` per class.
    pub class_purities: Vec<f64>,
}

pub fn g_criterion(t: &ContingencyTable) -> GScores {
    let n = t.total as f64;
    let row_max: u64 = t.counts.iter().map(|row| row.iter().copied().max().unwrap_or(0)).sum();
    let col_max: u64 = (0..t.num_classes()).map(|r| t.counts.iter().map(|row| row[r]).max().unwrap_or(0)).sum();
    let pur_c = row_max as f64 / n;
    let pur_d = col_max as f64 / n;
    GScores { pur_c, pur_d, g: (pur_c * pur_d).sqrt() }
}

pub fn k_criterion(t: &ContingencyTable) -> KScores {
    let squared_share = |counts: &mut dyn Iterator<Item = u64>, total: u64| {
        let total = total as f64;
        counts.map(|c| (c as f64 / total).powi(2)).sum::<f64>()
    };
    let cluster_purities: Vec<f64> = t
        .counts
        .iter()
        .zip(&t.cluster_totals)
        .map(|(row, &tot)| squared_share(&mut row.iter().copied(), tot))
        .collect();
    let class_purities: Vec<f64> = t
        .class_totals
        .iter()
        .enumerate()
        .map(|(r, &tot)| squared_share(&mut t.counts.iter().map(|row| row[r]), tot))
        .collect();
    let acp = mean(&cluster_purities);
    let asp = mean(&class_purities);
    KScores { acp, asp, k: (acp * asp).sqrt(), cluster_purities, class_purities }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Multi-class Gini impurity `1 − Σ p_i²` of a probability vector.
pub fn multiclass_gini(distribution: &[f64]) -> Result<f64> {
    if distribution.is_empty() {
        return Err(Error::Empty("distribution"));
    }
    if let Some((index, &value)) = distribution.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::InvalidProbability { index, value });
    }
    let sum: f64 = distribution.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::NotADistribution { sum });
    }
    Ok(1.0 - distribution.iter().map(|p| p * p).sum::<f64>())
}

/// Both criteria for one clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub g: GScores,
    pub k: KScores,
    pub table: ContingencyTable,
}

pub fn evaluate(predicted: &[usize], truth: &[usize]) -> Result<Evaluation> {
    let table = build_contingency(predicted, truth)?;
    Ok(Evaluation { g: g_criterion(&table), k: k_criterion(&table), table })
}
