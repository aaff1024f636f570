//! Clustering agreement: NMI, ARI and accuracy under the best matching.

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::error::{Error, Result};
use crate::graph::GroundTruthLabels;
use crate::tree::Partition;

/// Counts of nodes per (predicted cluster, true class).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<usize>>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    total: usize,
}

impl ContingencyTable {
    pub fn new(pred: &Partition, truth: &GroundTruthLabels) -> Result<Self> {
        Self::from_assignments(&pred.assignment(), truth.classes())
    }

    /// Both slices give a dense class index per node.
    pub fn from_assignments(pred: &[usize], truth: &[usize]) -> Result<Self> {
        if pred.len() != truth.len() {
            return Err(Error::DimensionMismatch {
                expected: truth.len(),
                found: pred.len(),
            });
        }
        let rows = pred.iter().max().map_or(0, |m| m + 1);
        let cols = truth.iter().max().map_or(0, |m| m + 1);
        let mut counts = vec![vec![0usize; cols]; rows];
        for (&p, &t) in pred.iter().zip(truth) {
            counts[p][t] += 1;
        }
        let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..cols).map(|c| counts.iter().map(|r| r[c]).sum()).collect();
        Ok(Self {
            counts,
            row_sums,
            col_sums,
            total: pred.len(),
        })
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn total(&self) -> usize {
        self.total
    }

    fn transposed(&self) -> Self {
        let counts = (0..self.col_sums.len())
            .map(|c| self.counts.iter().map(|r| r[c]).collect())
            .collect();
        Self {
            counts,
            row_sums: self.col_sums.clone(),
            col_sums: self.row_sums.clone(),
            total: self.total,
        }
    }
}

fn entropy_nats(sums: &[usize], total: f64) -> f64 {
    sums.iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// Mutual information over the arithmetic mean of the two entropies. When
/// either side has zero entropy the score is 1 for identical clusterings and
/// 0 otherwise.
pub fn nmi_table(t: &ContingencyTable) -> f64 {
    let n = t.total as f64;
    let hp = entropy_nats(&t.row_sums, n);
    let ht = entropy_nats(&t.col_sums, n);
    if hp == 0.0 || ht == 0.0 {
        return if hp == ht { 1.0 } else { 0.0 };
    }
    let mut mi = 0.0;
    for (i, row) in t.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (n * c / (t.row_sums[i] as f64 * t.col_sums[j] as f64)).ln();
            }
        }
    }
    (mi / (0.5 * (hp + ht))).clamp(0.0, 1.0)
}

fn pairs(k: usize) -> f64 {
    let k = k as f64;
    k * (k - 1.0) / 2.0
}

/// Adjusted Rand index under the permutation model.
pub fn ari_table(t: &ContingencyTable) -> f64 {
    let index: f64 = t.counts.iter().flatten().map(|&c| pairs(c)).sum();
    let a: f64 = t.row_sums.iter().map(|&c| pairs(c)).sum();
    let b: f64 = t.col_sums.iter().map(|&c| pairs(c)).sum();
    let total = pairs(t.total);
    if total == 0.0 {
        return 1.0;
    }
    let expected = a * b / total;
    let max = 0.5 * (a + b);
    if max == expected {
        // both clusterings are all-singletons or all-in-one
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Best fraction of nodes matched by a one-to-one cluster-to-class map.
pub fn acc_table(t: &ContingencyTable) -> f64 {
    if t.total == 0 {
        return 1.0;
    }
    let t = if t.row_sums.len() > t.col_sums.len() {
        t.transposed()
    } else {
        t.clone()
    };
    let rows = t.row_sums.len();
    let cols = t.col_sums.len();
    if rows == 0 {
        return 0.0;
    }
    let weights = Matrix::from_fn(rows, cols, |(i, j)| t.counts[i][j] as i64);
    let (matched, _) = kuhn_munkres(&weights);
    matched as f64 / t.total as f64
}

pub fn nmi(pred: &Partition, truth: &GroundTruthLabels) -> Result<f64> {
    Ok(nmi_table(&ContingencyTable::new(pred, truth)?))
}

pub fn ari(pred: &Partition, truth: &GroundTruthLabels) -> Result<f64> {
    Ok(ari_table(&ContingencyTable::new(pred, truth)?))
}

pub fn acc(pred: &Partition, truth: &GroundTruthLabels) -> Result<f64> {
    Ok(acc_table(&ContingencyTable::new(pred, truth)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub nmi: f64,
    pub ari: f64,
    pub acc: f64,
}

pub fn evaluate(pred: &Partition, truth: &GroundTruthLabels) -> Result<Scores> {
    let t = ContingencyTable::new(pred, truth)?;
    Ok(Scores {
        nmi: nmi_table(&t),
        ari: ari_table(&t),
        acc: acc_table(&t),
    })
}
