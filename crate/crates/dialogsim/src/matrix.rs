//! Labeled square matrices: pairwise distances and per-row rankings.
//!
//! Both types share the CSV layout: the first row holds the dialog ids, each
//! following row holds its id followed by the row values. Distances are
//! written with 6 decimal places, ranks as integers.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// N×N matrix of pairwise dialog distances.
///
/// Matrices built by the distance computations are symmetric with a zero
/// diagonal. Borda-sum matrices reuse this container but only guarantee
/// row-wise order semantics; see [`crate::fusion::borda_sum`].
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<S> {
    labels: Vec<String>,
    n: usize,
    values: Vec<S>,
}

impl<S: Scalar> DistanceMatrix<S> {
    /// Wraps a row-major buffer; `values.len()` must equal `labels.len()²`.
    pub fn from_parts(labels: Vec<String>, values: Vec<S>) -> Result<Self> {
        let n = labels.len();
        if values.len() != n * n {
            return Err(Error::ShapeMismatch {
                left: n * n,
                right: values.len(),
            });
        }
        Ok(Self { labels, n, values })
    }

    /// Builds a symmetric zero-diagonal matrix from a pairwise function,
    /// evaluating `f(i, j)` once per unordered pair. Rows are computed in
    /// parallel; the result does not depend on thread count.
    pub fn symmetric_from_fn<F>(labels: Vec<String>, f: F) -> Self
    where
        F: Fn(usize, usize) -> S + Sync,
    {
        let n = labels.len();
        let mut values = vec![S::zero(); n * n];
        values
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, row)| {
                for (j, slot) in row.iter_mut().enumerate().skip(i + 1) {
                    *slot = f(i, j);
                }
            });
        for i in 0..n {
            for j in 0..i {
                values[i * n + j] = values[j * n + i];
            }
        }
        Self { labels, n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == S::zero())
    }

    /// Writes the CSV layout with 6-decimal values.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(w);
        writer.write_record(&self.labels)?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut record = Vec::with_capacity(self.n + 1);
            record.push(label.clone());
            record.extend(self.row(i).iter().map(|v| format!("{v:.6}")));
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let (labels, values) = read_labeled_csv(r, |field| {
            field
                .parse::<f64>()
                .ok()
                .and_then(S::from_f64)
                .ok_or_else(|| Error::Format(format!("invalid distance value '{field}'")))
        })?;
        Self::from_parts(labels, values)
    }
}

/// N×N matrix of per-row similarity ranks.
///
/// Every matrix derived from a [`DistanceMatrix`] has rows that are
/// permutations of `1..=n` with rank 1 on the diagonal. Perturbed matrices
/// (see [`crate::evalx::perturb_ranking`]) may break the permutation
/// property; the container allows that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingMatrix {
    labels: Vec<String>,
    n: usize,
    ranks: Vec<u32>,
}

impl RankingMatrix {
    pub fn from_parts(labels: Vec<String>, ranks: Vec<u32>) -> Result<Self> {
        let n = labels.len();
        if ranks.len() != n * n {
            return Err(Error::ShapeMismatch {
                left: n * n,
                right: ranks.len(),
            });
        }
        Ok(Self { labels, n, ranks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.ranks[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.ranks[i * self.n..(i + 1) * self.n]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub(crate) fn ranks_mut(&mut self) -> &mut [u32] {
        &mut self.ranks
    }

    /// True when every row is a permutation of `1..=n`.
    pub fn rows_are_permutations(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            let mut seen = vec![false; n];
            self.row(i).iter().all(|&r| {
                (1..=n as u32).contains(&r) && !std::mem::replace(&mut seen[(r - 1) as usize], true)
            })
        })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(w);
        writer.write_record(&self.labels)?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut record = Vec::with_capacity(self.n + 1);
            record.push(label.clone());
            record.extend(self.row(i).iter().map(|r| r.to_string()));
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let (labels, ranks) = read_labeled_csv(r, |field| {
            field
                .parse::<u32>()
                .map_err(|_| Error::Format(format!("invalid rank value '{field}'")))
        })?;
        Self::from_parts(labels, ranks)
    }
}

fn read_labeled_csv<R: Read, T, F>(r: R, parse: F) -> Result<(Vec<String>, Vec<T>)>
where
    F: Fn(&str) -> Result<T>,
{
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(r);
    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| Error::Format("empty matrix file".into()))??;
    let labels: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    let n = labels.len();
    let mut values = Vec::with_capacity(n * n);
    for (i, record) in records.enumerate() {
        let record = record?;
        if i >= n {
            return Err(Error::Format(format!("expected {n} rows, found more")));
        }
        if record.len() != n + 1 {
            return Err(Error::Format(format!(
                "row {} has {} fields, expected {}",
                i + 1,
                record.len(),
                n + 1
            )));
        }
        if record.get(0) != Some(labels[i].as_str()) {
            return Err(Error::Format(format!(
                "row {} is labeled '{}', expected '{}'",
                i + 1,
                record.get(0).unwrap_or(""),
                labels[i]
            )));
        }
        for field in record.iter().skip(1) {
            values.push(parse(field)?);
        }
    }
    if values.len() != n * n {
        return Err(Error::Format(format!(
            "expected {} rows, found {}",
            n,
            values.len() / n.max(1)
        )));
    }
    Ok((labels, values))
}

pub(crate) fn check_same_labels(a: &[String], b: &[String]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a != b {
        return Err(Error::LabelMismatch);
    }
    Ok(())
}
