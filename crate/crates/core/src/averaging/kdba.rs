use std::borrow::Borrow;

use rayon::prelude::*;

use super::{check_set, kernel_inertia_ln, CentroidResult};
use crate::elastic::ama;
use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::series::TimeSeries;

/// One kernelized barycenter step.
///
/// For each member, every reference timestamp receives the member's
/// samples weighted by its row of the alignment matrix average; the
/// output is the mean of these per-member series and keeps the length of
/// `reference`.
pub fn kdba<T: Borrow<TimeSeries> + Sync>(
    reference: &TimeSeries,
    set: &[T],
    params: &KernelParams,
) -> Result<TimeSeries> {
    check_set(set, reference.dim())?;
    let (len, d) = (reference.len(), reference.dim());

    let per_member = set
        .par_iter()
        .enumerate()
        .map(|(n, s)| {
            let s = s.borrow();
            let m = ama(reference, s, params).map_err(|e| match e {
                Error::Underflow(msg) => Error::Underflow(format!("member {}: {msg}", n + 1)),
                other => other,
            })?;
            let mut ts = vec![0.0; len * d];
            for i in 0..len {
                let row = m.row(i);
                let norm: f64 = row.iter().sum();
                if norm.is_nan() || norm <= 0.0 {
                    return Err(Error::Underflow(format!(
                        "member {}: reference sample {} has no alignment mass",
                        n + 1,
                        i + 1
                    )));
                }
                let out = &mut ts[i * d..(i + 1) * d];
                for (j, &w) in row.iter().enumerate() {
                    for (acc, v) in out.iter_mut().zip(s.row(j)) {
                        *acc += v * w;
                    }
                }
                for v in out.iter_mut() {
                    *v /= norm;
                }
            }
            Ok(ts)
        })
        .collect::<Result<Vec<_>>>()?;

    let n = per_member.len() as f64;
    let mut out = vec![0.0; len * d];
    for ts in &per_member {
        for (acc, v) in out.iter_mut().zip(ts) {
            *acc += v;
        }
    }
    for v in &mut out {
        *v /= n;
    }
    TimeSeries::new(out, len, d)
}

/// Iterated KDBA from `init`, continuing while the summed KDTW similarity
/// strictly increases, for at most `max_iter` steps. Returns the best
/// centroid seen; the trace holds log similarities.
pub fn ikdba<T: Borrow<TimeSeries> + Sync>(
    set: &[T],
    params: &KernelParams,
    max_iter: usize,
    init: &TimeSeries,
) -> Result<CentroidResult> {
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    check_set(set, init.dim())?;
    let mut best = init.clone();
    let mut best_inertia = kernel_inertia_ln(&best, set, params)?;
    let mut trace = vec![best_inertia];
    let mut iterations = 0;
    while iterations < max_iter {
        let candidate = kdba(&best, set, params)?;
        iterations += 1;
        let value = kernel_inertia_ln(&candidate, set, params)?;
        if value > best_inertia {
            best = candidate;
            best_inertia = value;
            trace.push(value);
        } else {
            break;
        }
    }
    Ok(CentroidResult {
        centroid: best,
        inertia_trace: trace,
        iterations_run: iterations,
    })
}
