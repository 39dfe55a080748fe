use std::borrow::Borrow;

use rayon::prelude::*;

use super::{check_set, dtw_inertia, CentroidResult};
use crate::elastic::{check_dims, dtw};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Midpoints of the samples matched along the optimal DTW path; the output
/// has one sample per path step.
pub fn pairwise_dtw_centroid(x: &TimeSeries, y: &TimeSeries) -> Result<TimeSeries> {
    let (_, path) = dtw(x, y)?;
    let d = x.dim();
    let mut data = Vec::with_capacity(path.len() * d);
    for &(i, j) in path.steps() {
        data.extend(
            x.row(i - 1)
                .iter()
                .zip(y.row(j - 1))
                .map(|(a, b)| 0.5 * (a + b)),
        );
    }
    TimeSeries::new(data, path.len(), d)
}

/// One DBA refinement: every sample of every member is averaged into the
/// reference timestamps it is aligned with.
pub fn dba_step<T: Borrow<TimeSeries> + Sync>(reference: &TimeSeries, set: &[T]) -> Result<TimeSeries> {
    check_set(set, reference.dim())?;
    let paths = set
        .par_iter()
        .map(|s| {
            check_dims(reference, s.borrow())?;
            dtw(reference, s.borrow()).map(|(_, path)| path)
        })
        .collect::<Result<Vec<_>>>()?;

    let (len, d) = (reference.len(), reference.dim());
    let mut sums = vec![0.0; len * d];
    let mut counts = vec![0usize; len];
    for (s, path) in set.iter().zip(&paths) {
        let s = s.borrow();
        for &(i, j) in path.steps() {
            counts[i - 1] += 1;
            for (acc, v) in sums[(i - 1) * d..i * d].iter_mut().zip(s.row(j - 1)) {
                *acc += v;
            }
        }
    }
    for (t, &n) in counts.iter().enumerate() {
        if n == 0 {
            return Err(Error::Coverage { index: t + 1 });
        }
        for v in &mut sums[t * d..(t + 1) * d] {
            *v /= n as f64;
        }
    }
    TimeSeries::new(sums, len, d)
}

/// Iterated DBA from `init`. Stops as soon as a step fails to strictly
/// lower the summed DTW cost, or after `max_iter` steps, and returns the
/// best centroid seen.
pub fn dba<T: Borrow<TimeSeries> + Sync>(set: &[T], max_iter: usize, init: &TimeSeries) -> Result<CentroidResult> {
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    check_set(set, init.dim())?;
    let mut best = init.clone();
    let mut best_inertia = dtw_inertia(&best, set)?;
    let mut trace = vec![best_inertia];
    let mut iterations = 0;
    while iterations < max_iter {
        let candidate = dba_step(&best, set)?;
        iterations += 1;
        let value = dtw_inertia(&candidate, set)?;
        if value < best_inertia {
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

#[cfg(test)]
mod tests {
    use super::*;

    fn uni(v: &[f64]) -> TimeSeries {
        TimeSeries::univariate(v.to_vec()).unwrap()
    }

    #[test]
    fn pairwise_centroid_examples() {
        let x = uni(&[0.0, 3.0, 1.0]);
        assert_eq!(pairwise_dtw_centroid(&x, &x).unwrap(), x);
        assert_eq!(
            pairwise_dtw_centroid(&uni(&[0.0]), &uni(&[2.0])).unwrap(),
            uni(&[1.0])
        );
        assert_eq!(
            pairwise_dtw_centroid(&uni(&[0.0, 0.0]), &uni(&[0.0, 1.0])).unwrap(),
            uni(&[0.0, 0.5])
        );
    }

    #[test]
    fn dba_step_examples() {
        let r = uni(&[0.0, 1.0, 4.0]);
        assert_eq!(dba_step(&r, std::slice::from_ref(&r)).unwrap(), r);

        let c = uni(&[7.0; 4]);
        let set = [uni(&[1.0; 4]), uni(&[3.0; 4])];
        assert_eq!(dba_step(&c, &set).unwrap(), uni(&[2.0; 4]));

        let r = uni(&[0.0, 1.0]);
        let set = [uni(&[0.0, 1.0]), uni(&[0.0, 3.0])];
        assert_eq!(dba_step(&r, &set).unwrap(), uni(&[0.0, 2.0]));

        let empty: [TimeSeries; 0] = [];
        assert_eq!(dba_step(&r, &empty), Err(Error::EmptySet));
    }

    #[test]
    fn dba_singleton_converges_in_one_iteration() {
        let x = uni(&[0.0, 2.0, 1.0, -1.0]);
        let res = dba(std::slice::from_ref(&x), 20, &x).unwrap();
        assert_eq!(res.centroid, x);
        assert_eq!(res.iterations_run, 1);
        assert_eq!(res.inertia_trace, vec![0.0]);
    }

    #[test]
    fn dba_trace_strictly_decreases() {
        let set = [
            uni(&[0.0, 1.0, 2.0, 1.0, 0.0, 0.0]),
            uni(&[0.0, 0.0, 1.0, 2.0, 1.0, 0.0]),
            uni(&[0.0, 0.0, 0.0, 1.0, 2.5, 1.0]),
        ];
        let res = dba(&set, 20, &set[1]).unwrap();
        assert!(res.inertia_trace.windows(2).all(|w| w[1] < w[0]));
        assert!(res.iterations_run <= 20);
    }
}
