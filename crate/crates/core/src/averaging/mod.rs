//! Time-elastic centroids: the pairwise DTW centroid, DBA, the kernelized
//! KDBA / iKDBA, the pairwise KDTW average and its progressive extension.

mod dba;
mod kdba;
mod pwa;

use std::borrow::Borrow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use dba::{dba, dba_step, pairwise_dtw_centroid};
pub use kdba::{ikdba, kdba};
pub use pwa::{kdtw_pwa, pkdtw_pwa, PairOrdering};

use crate::elastic::{dtw_cost, kdtw, log_add_exp};
use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::series::TimeSeries;

/// Iteration cap used by the iterative methods when none is given.
pub const DEFAULT_MAX_ITER: usize = 20;

/// How a candidate centroid is scored against the set it summarizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InertiaMeasure {
    /// Sum of DTW costs; lower is better.
    DtwDistance,
    /// Sum of KDTW similarities; higher is better.
    KdtwSimilarity,
}

/// Output of a centroid search.
///
/// `inertia_trace` starts with the inertia of the initial centroid and gets
/// one entry per accepted iteration. Kernel-similarity traces hold the
/// natural log of the summed similarity. Single-pass methods leave it empty.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidResult {
    pub centroid: TimeSeries,
    pub inertia_trace: Vec<f64>,
    pub iterations_run: usize,
}

impl CentroidResult {
    pub fn single_pass(centroid: TimeSeries) -> Self {
        Self {
            centroid,
            inertia_trace: Vec::new(),
            iterations_run: 0,
        }
    }

    /// JSON text with the centroid rows, the trace and the iteration count.
    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<f64>> = self.centroid.rows().map(|r| r.to_vec()).collect();
        let fmt_list = |v: &[f64]| {
            v.iter()
                .map(|&x| crate::io::fmt_f64(x))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let rows_text = rows
            .iter()
            .map(|r| format!("[{}]", fmt_list(r)))
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "{{\"centroid\": [{}], \"inertia_trace\": [{}], \"iterations_run\": {}}}",
            rows_text,
            fmt_list(&self.inertia_trace),
            self.iterations_run
        )
    }
}

pub(crate) fn check_set<T: Borrow<TimeSeries>>(set: &[T], dim: usize) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    for s in set {
        let s = s.borrow();
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
    }
    Ok(())
}

/// Summed DTW cost, or summed KDTW similarity, between `c` and each member.
pub fn inertia<T: Borrow<TimeSeries> + Sync>(
    c: &TimeSeries,
    set: &[T],
    measure: InertiaMeasure,
    params: &KernelParams,
) -> Result<f64> {
    match measure {
        InertiaMeasure::DtwDistance => dtw_inertia(c, set),
        InertiaMeasure::KdtwSimilarity => {
            crate::elastic::KernelValue::from_ln(kernel_inertia_ln(c, set, params)?).value()
        }
    }
}

pub(crate) fn dtw_inertia<T: Borrow<TimeSeries> + Sync>(c: &TimeSeries, set: &[T]) -> Result<f64> {
    check_set(set, c.dim())?;
    let costs = set
        .par_iter()
        .map(|s| dtw_cost(c, s.borrow()))
        .collect::<Result<Vec<_>>>()?;
    Ok(costs.into_iter().sum())
}

/// `ln` of the summed KDTW similarity.
pub(crate) fn kernel_inertia_ln<T: Borrow<TimeSeries> + Sync>(
    c: &TimeSeries,
    set: &[T],
    params: &KernelParams,
) -> Result<f64> {
    check_set(set, c.dim())?;
    let lns = set
        .par_iter()
        .map(|s| kdtw(c, s.borrow(), params).map(|k| k.ln()))
        .collect::<Result<Vec<_>>>()?;
    Ok(lns.into_iter().fold(f64::NEG_INFINITY, log_add_exp))
}
