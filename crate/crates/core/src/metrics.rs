//! Partition comparison (entropy, mutual information, NMI) and summaries of
//! enhancement traces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enhance::{EdgeClass, IterationRecord};
use crate::error::{Error, Result};
use crate::graph::Partition;

/// Co-occurrence counts of two partitions over the same node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contingency {
    rows: usize,
    cols: usize,
    table: Vec<u64>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl Contingency {
    pub fn new(a: &Partition, b: &Partition) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::SizeMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        let (rows, cols) = (a.community_count(), b.community_count());
        let mut table = vec![0u64; rows * cols];
        let mut row_sums = vec![0u64; rows];
        let mut col_sums = vec![0u64; cols];
        for (&i, &j) in a.labels().iter().zip(b.labels()) {
            table[i * cols + j] += 1;
            row_sums[i] += 1;
            col_sums[j] += 1;
        }
        Ok(Self {
            rows,
            cols,
            table,
            row_sums,
            col_sums,
            total: a.len() as u64,
        })
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.table[row * self.cols + col]
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Mutual information in nats. Cell terms are summed in sorted order, so
    /// the result does not depend on which partition is the row side.
    pub fn mutual_information(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let n = self.total as f64;
        let mut terms: Vec<f64> = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let nij = self.get(i, j);
                if nij == 0 {
                    continue;
                }
                let joint = (self.total * nij) as f64;
                let marginal = (self.row_sums[i] * self.col_sums[j]) as f64;
                terms.push(nij as f64 / n * (joint / marginal).ln());
            }
        }
        terms.sort_by(f64::total_cmp);
        terms.iter().sum()
    }
}

fn entropy_of_counts(counts: &[u64], total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let mut terms: Vec<f64> = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Shannon entropy (nats) of the community size distribution.
pub fn entropy(partition: &Partition) -> f64 {
    let sizes: Vec<u64> = partition.sizes().into_iter().map(|s| s as u64).collect();
    entropy_of_counts(&sizes, partition.len() as u64)
}

pub fn mutual_information(a: &Partition, b: &Partition) -> Result<f64> {
    Ok(Contingency::new(a, b)?.mutual_information())
}

/// `MI(a, b) / sqrt(H(a) H(b))`.
///
/// When either entropy is zero the ratio is undefined; the result is then 1
/// if the partitions group nodes identically and 0 otherwise.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    let table = Contingency::new(a, b)?;
    if a == b {
        return Ok(1.0);
    }
    let ha = entropy_of_counts(table.row_sums(), table.total());
    let hb = entropy_of_counts(table.col_sums(), table.total());
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    let value = table.mutual_information() / (ha * hb).sqrt();
    Ok(value.clamp(0.0, 1.0))
}

/// Cumulative added-edge counts after one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CumulativePoint {
    pub iteration: usize,
    pub revising: usize,
    pub reinforcing: usize,
    pub noise: usize,
}

impl CumulativePoint {
    pub fn total(&self) -> usize {
        self.revising + self.reinforcing + self.noise
    }

    pub fn revising_fraction(&self) -> f64 {
        ratio(self.revising, self.total())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevisingSummary {
    pub revising: f64,
    pub reinforcing: f64,
    pub noise: f64,
    pub added: usize,
    /// One point per trace record, iteration 0 included.
    pub cumulative: Vec<CumulativePoint>,
    /// Nothing was added; all fractions are reported as 0.
    pub empty: bool,
}

fn ratio(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        part as f64 / whole as f64
    }
}

/// Fractions of revising, reinforcing, and noise edges over a trace.
/// Fails if any added edge carries no class (trace run without ground truth).
pub fn revising_fraction(trace: &[IterationRecord]) -> Result<RevisingSummary> {
    let mut point = CumulativePoint {
        iteration: 0,
        revising: 0,
        reinforcing: 0,
        noise: 0,
    };
    let mut cumulative = Vec::with_capacity(trace.len());
    for record in trace {
        point.iteration = record.iteration;
        for added in &record.added_edges {
            match added.class {
                Some(EdgeClass::Revising) => point.revising += 1,
                Some(EdgeClass::Reinforcing) => point.reinforcing += 1,
                Some(EdgeClass::Noise) => point.noise += 1,
                None => return Err(Error::MissingGroundTruth),
            }
        }
        cumulative.push(point);
    }
    let added = point.total();
    Ok(RevisingSummary {
        revising: ratio(point.revising, added),
        reinforcing: ratio(point.reinforcing, added),
        noise: ratio(point.noise, added),
        added,
        cumulative,
        empty: added == 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeltaSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "=")]
    Equal,
}

impl DeltaSign {
    /// Sign of `after - before`; differences within 1e-12 count as equal.
    pub fn of(before: f64, after: f64) -> Self {
        let delta = after - before;
        if delta.abs() <= 1e-12 {
            DeltaSign::Equal
        } else if delta > 0.0 {
            DeltaSign::Plus
        } else {
            DeltaSign::Minus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            DeltaSign::Plus => "+",
            DeltaSign::Minus => "-",
            DeltaSign::Equal => "=",
        }
    }
}

impl fmt::Display for DeltaSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub initial_nmi: f64,
    pub final_nmi: f64,
    pub best_nmi: f64,
    pub delta_sign: DeltaSign,
}

pub fn improvement(trace: &[IterationRecord]) -> Result<Improvement> {
    let values: Vec<f64> = trace
        .iter()
        .map(|r| r.nmi_vs_ground_truth.ok_or(Error::MissingGroundTruth))
        .collect::<Result<_>>()?;
    let (&initial, &last) = match (values.first(), values.last()) {
        (Some(first), Some(last)) => (first, last),
        _ => return Err(Error::MissingGroundTruth),
    };
    Ok(Improvement {
        initial_nmi: initial,
        final_nmi: last,
        best_nmi: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        delta_sign: DeltaSign::of(initial, last),
    })
}
