use std::borrow::Borrow;

use rayon::prelude::*;

use crate::averaging::{check_set, InertiaMeasure};
use crate::elastic::{dtw_cost, kdtw, log_add_exp};
use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::series::TimeSeries;

/// Symmetric `n x n` matrix of pairwise scores: DTW costs, or KDTW values
/// as natural logs. The diagonal is unused.
pub(crate) fn pairwise_scores<T: Borrow<TimeSeries> + Sync>(
    set: &[T],
    measure: InertiaMeasure,
    params: &KernelParams,
) -> Result<Vec<f64>> {
    let n = set.len();
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(a, b)| {
            let (x, y) = (set[a].borrow(), set[b].borrow());
            match measure {
                InertiaMeasure::DtwDistance => dtw_cost(x, y),
                InertiaMeasure::KdtwSimilarity => kdtw(x, y, params).map(|k| k.ln()),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = vec![0.0; n * n];
    for (&(a, b), v) in cells.iter().zip(values) {
        m[a * n + b] = v;
        m[b * n + a] = v;
    }
    Ok(m)
}

/// Medoid index from a pairwise matrix, optionally leaving one member out.
/// Distance mode minimizes the summed cost, similarity mode maximizes the
/// summed similarity over the other members; ties go to the lowest index.
pub(crate) fn medoid_from_scores(
    scores: &[f64],
    n: usize,
    measure: InertiaMeasure,
    exclude: Option<usize>,
) -> Option<usize> {
    let members = (0..n).filter(|&i| Some(i) != exclude);
    let mut best: Option<(usize, f64)> = None;
    for i in members.clone() {
        let others = members.clone().filter(|&j| j != i).map(|j| scores[i * n + j]);
        let total = match measure {
            InertiaMeasure::DtwDistance => others.sum::<f64>(),
            // Negated log of the summed similarity: lower is better.
            InertiaMeasure::KdtwSimilarity => -others.fold(f64::NEG_INFINITY, log_add_exp),
        };
        if best.is_none_or(|(_, b)| total < b) {
            best = Some((i, total));
        }
    }
    best.map(|(i, _)| i)
}

/// Set member with the smallest summed DTW cost (or largest summed KDTW
/// similarity) to the other members; ties go to the lowest index.
pub fn medoid<T: Borrow<TimeSeries> + Sync>(
    set: &[T],
    measure: InertiaMeasure,
    params: &KernelParams,
) -> Result<(usize, TimeSeries)> {
    let first = set.first().ok_or(Error::EmptySet)?;
    check_set(set, first.borrow().dim())?;
    let scores = pairwise_scores(set, measure, params)?;
    let idx = medoid_from_scores(&scores, set.len(), measure, None).expect("non-empty set");
    Ok((idx, set[idx].borrow().clone()))
}
