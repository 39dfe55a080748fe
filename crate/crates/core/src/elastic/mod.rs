//! Time-elastic measures: DTW with path recovery, the KDTW kernel, forward
//! alignment matrices, alignment-matrix averages and the alignment
//! probabilities derived from them.

mod ama;
pub mod direct;
mod dtw;
mod kdtw;

pub use ama::{alignment_probabilities, ama, backward_matrix, AlignmentProbability, AmaMatrix};
pub use dtw::{dtw, dtw_cost, AlignmentPath};
pub use kdtw::{forward_matrix, kdtw, kdtw_normalized, ForwardMatrix, KernelValue};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Sum of squared coordinate differences.
pub fn squared_euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(sq_dist(x, y))
}

#[inline]
pub(crate) fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub(crate) fn check_dims(x: &TimeSeries, y: &TimeSeries) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

/// `ln(exp(a) + exp(b) + exp(c))`, exact for `-inf` arguments.
#[inline]
pub(crate) fn log_sum_exp3(a: f64, b: f64, c: f64) -> f64 {
    let m = a.max(b).max(c);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp() + (c - m).exp()).ln()
}

#[inline]
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `ln(1/3)`, the constant factor of every local kernel weight.
pub(crate) const LN_THIRD: f64 = -1.098_612_288_668_109_8;
