//! Time series and labeled collections of them.
//!
//! A [`TimeSeries`] is a `T x d` matrix of finite reals: one row per
//! timestamp, one column per channel. Documentation uses 1-based time
//! indices; accessors are 0-based.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A length-`T` sequence of `d`-dimensional samples, stored row-major.
#[derive(Clone, PartialEq)]
pub struct TimeSeries {
    data: Vec<f64>,
    len: usize,
    dim: usize,
}

impl TimeSeries {
    /// Builds a series from row-major samples. Fails on empty shapes,
    /// a buffer of the wrong size or any non-finite entry.
    pub fn new(data: Vec<f64>, len: usize, dim: usize) -> Result<Self> {
        if len == 0 || dim == 0 {
            return Err(Error::InvalidSeries(format!(
                "shape {len}x{dim}: length and dimension must both be at least 1"
            )));
        }
        if data.len() != len * dim {
            return Err(Error::InvalidSeries(format!(
                "buffer holds {} values, shape {len}x{dim} needs {}",
                data.len(),
                len * dim
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "non-finite value at timestamp {}, channel {}",
                pos / dim + 1,
                pos % dim + 1
            )));
        }
        Ok(Self { data, len, dim })
    }

    /// Scalar (`d = 1`) series.
    pub fn univariate(values: Vec<f64>) -> Result<Self> {
        let len = values.len();
        Self::new(values, len, 1)
    }

    /// Builds a series from a list of equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (t, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::InvalidSeries(format!(
                    "row {} has {} channels, expected {dim}",
                    t + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(data, rows.len(), dim)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sample at 0-based timestamp `t`.
    #[inline]
    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    /// Row-major samples.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Same samples in reverse temporal order.
    pub fn reversed(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for row in self.data.chunks_exact(self.dim).rev() {
            data.extend_from_slice(row);
        }
        Self {
            data,
            len: self.len,
            dim: self.dim,
        }
    }

    /// Values of channel `c` over time.
    pub fn channel(&self, c: usize) -> impl Iterator<Item = f64> + '_ {
        self.data.iter().skip(c).step_by(self.dim).copied()
    }

    /// Per-channel z-normalization. Constant channels are only centered.
    pub fn z_normalized(&self) -> Self {
        let n = self.len as f64;
        let mut data = self.data.clone();
        for c in 0..self.dim {
            let mean = self.channel(c).sum::<f64>() / n;
            let var = self.channel(c).map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let sd = var.sqrt();
            for row in data.chunks_exact_mut(self.dim) {
                row[c] -= mean;
                if sd > 0.0 {
                    row[c] /= sd;
                }
            }
        }
        Self {
            data,
            len: self.len,
            dim: self.dim,
        }
    }

    /// 0-based index of the largest value of channel `c` (first on ties).
    pub fn argmax(&self, c: usize) -> usize {
        let mut best = 0;
        for (t, v) in self.channel(c).enumerate() {
            if v > self.data[best * self.dim + c] {
                best = t;
            }
        }
        best
    }
}

impl fmt::Debug for TimeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeSeries")
            .field("len", &self.len)
            .field("dim", &self.dim)
            .field("data", &self.data)
            .finish()
    }
}

/// Ordered `(label, series)` pairs sharing one dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    entries: Vec<(String, TimeSeries)>,
}

impl LabeledDataset {
    pub fn new(entries: Vec<(String, TimeSeries)>) -> Result<Self> {
        let Some((_, first)) = entries.first() else {
            return Err(Error::EmptyDataset);
        };
        let dim = first.dim();
        if let Some((_, bad)) = entries.iter().find(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }

    pub fn entries(&self) -> &[(String, TimeSeries)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &TimeSeries)> {
        self.entries.iter().map(|(l, s)| (l.as_str(), s))
    }

    pub fn series(&self) -> Vec<&TimeSeries> {
        self.entries.iter().map(|(_, s)| s).collect()
    }

    /// Distinct labels in lexicographic order.
    pub fn labels(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(l, _)| l.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Members of one class, in dataset order.
    pub fn class(&self, label: &str) -> Vec<&TimeSeries> {
        self.entries
            .iter()
            .filter(|(l, _)| l == label)
            .map(|(_, s)| s)
            .collect()
    }

    pub fn map_series(&self, f: impl Fn(&TimeSeries) -> TimeSeries) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|(l, s)| (l.clone(), f(s)))
                .collect(),
        }
    }
}
