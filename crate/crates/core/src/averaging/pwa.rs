use std::borrow::Borrow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::check_set;
use crate::elastic::{ama, check_dims, kdtw};
use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::series::TimeSeries;

/// Pairing rule of the progressive average.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairOrdering {
    /// Merge the first two remaining series, then the next two, and so on.
    #[default]
    InputOrder,
    /// Greedily merge the most KDTW-similar remaining pair first.
    SimilarFirst,
}

/// Deposits `(x(i) + y(j)) * w` at time `(i + j) / 2`, splitting odd sums
/// between the floor (weight `alpha`) and ceiling (`1 - alpha`) bins.
#[allow(clippy::too_many_arguments)]
#[inline]
fn deposit(acc: &mut [f64], norm: &mut [f64], d: usize, i: usize, j: usize, xi: &[f64], yj: &[f64], w: f64) {
    let twice = i + j;
    let lo = twice / 2;
    let hi = twice.div_ceil(2);
    let alpha = twice as f64 / 2.0 - lo as f64;
    for c in 0..d {
        let v = (xi[c] + yj[c]) * w;
        acc[(lo - 1) * d + c] += alpha * v;
        acc[(hi - 1) * d + c] += (1.0 - alpha) * v;
    }
    norm[lo - 1] += alpha * w;
    norm[hi - 1] += (1.0 - alpha) * w;
}

/// KDTW pairwise average: the expected aligned sample, placed at the
/// expected aligned time.
///
/// Output length is `max(|x|, |y|)`. Every aligned pair `(i, j)` contributes
/// `x(i) + y(j)` with its alignment-matrix weight at time `(i + j) / 2`;
/// the two accumulations (rows of `x`, then rows of `y`) are normalized per
/// output timestamp and combined as `(A / N_A + B / N_B) / 4`.
pub fn kdtw_pwa(x: &TimeSeries, y: &TimeSeries, params: &KernelParams) -> Result<TimeSeries> {
    check_dims(x, y)?;
    let m = ama(x, y, params)?;
    let (p, q, d) = (x.len(), y.len(), x.dim());
    let len = p.max(q);

    let mut a = vec![0.0; len * d];
    let mut b = vec![0.0; len * d];
    let mut na = vec![0.0; len];
    let mut nb = vec![0.0; len];
    for i in 1..=p {
        let row = m.row(i - 1);
        for j in 1..=q {
            deposit(&mut a, &mut na, d, i, j, x.row(i - 1), y.row(j - 1), row[j - 1]);
        }
    }
    for i in 1..=q {
        for j in 1..=p {
            deposit(&mut b, &mut nb, d, i, j, x.row(j - 1), y.row(i - 1), m.get(j - 1, i - 1));
        }
    }

    let mut out = vec![0.0; len * d];
    for t in 0..len {
        if !(na[t] > 0.0 && nb[t] > 0.0) {
            return Err(Error::Coverage { index: t + 1 });
        }
        for c in 0..d {
            out[t * d + c] = (a[t * d + c] / na[t] + b[t * d + c] / nb[t]) / 4.0;
        }
    }
    TimeSeries::new(out, len, d)
}

/// Progressive pairwise averaging: each round replaces pairs of series by
/// their [`kdtw_pwa`] average, carrying an odd leftover into the next
/// round, until one series remains.
pub fn pkdtw_pwa<T: Borrow<TimeSeries> + Sync>(
    set: &[T],
    params: &KernelParams,
    ordering: PairOrdering,
) -> Result<TimeSeries> {
    let first = set.first().ok_or(Error::EmptySet)?;
    check_set(set, first.borrow().dim())?;
    let mut work: Vec<TimeSeries> = set.iter().map(|s| s.borrow().clone()).collect();
    while work.len() > 1 {
        let pairs: Vec<(usize, usize)> = match ordering {
            PairOrdering::InputOrder => (0..work.len() / 2).map(|k| (2 * k, 2 * k + 1)).collect(),
            PairOrdering::SimilarFirst => similar_first_pairs(&work, params)?,
        };
        let merged = pairs
            .par_iter()
            .map(|&(a, b)| kdtw_pwa(&work[a], &work[b], params))
            .collect::<Result<Vec<_>>>()?;
        let mut used = vec![false; work.len()];
        for &(a, b) in &pairs {
            used[a] = true;
            used[b] = true;
        }
        let leftover: Vec<TimeSeries> = work
            .into_iter()
            .zip(used)
            .filter(|(_, u)| !u)
            .map(|(s, _)| s)
            .collect();
        work = merged;
        work.extend(leftover);
    }
    Ok(work.pop().expect("non-empty working set"))
}

fn similar_first_pairs(work: &[TimeSeries], params: &KernelParams) -> Result<Vec<(usize, usize)>> {
    let n = work.len();
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let sims = cells
        .par_iter()
        .map(|&(a, b)| kdtw(&work[a], &work[b], params).map(|k| k.ln()))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..cells.len()).collect();
    // Descending similarity, lowest index pair first on ties.
    order.sort_by(|&u, &v| sims[v].total_cmp(&sims[u]).then(cells[u].cmp(&cells[v])));
    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(n / 2);
    for k in order {
        let (a, b) = cells[k];
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            pairs.push((a, b));
        }
    }
    Ok(pairs)
}
