use rayon::prelude::*;

use super::classify::{nearest, representative, BuildOptions, Method};
use super::medoid::pairwise_scores;
use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::series::{LabeledDataset, TimeSeries};

struct Class<'a> {
    label: String,
    members: Vec<&'a TimeSeries>,
    scores: Option<Vec<f64>>,
    full: TimeSeries,
}

/// Leave-one-out misclassification count of `method` at one stiffness.
///
/// Only the held-out item's class is rebuilt; the other classes keep their
/// full-data representative, and medoid searches reuse one cached pairwise
/// matrix per class.
pub fn loo_errors(
    train: &LabeledDataset,
    method: Method,
    params: &KernelParams,
    opts: &BuildOptions,
) -> Result<usize> {
    let labels = train.labels();
    let classes = labels
        .iter()
        .map(|label| {
            let members = train.class(label);
            if members.len() < 2 {
                return Err(Error::LooInfeasible {
                    label: label.clone(),
                });
            }
            let scores = if method != Method::PkdtwPwa {
                Some(pairwise_scores(&members, method.measure(), params)?)
            } else {
                None
            };
            let full = representative(method, &members, None, scores.as_deref(), params, opts)?;
            Ok(Class {
                label: label.clone(),
                members,
                scores,
                full,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let items: Vec<(usize, usize)> = classes
        .iter()
        .enumerate()
        .flat_map(|(c, class)| (0..class.members.len()).map(move |h| (c, h)))
        .collect();
    let wrong = items
        .par_iter()
        .map(|&(c, h)| {
            let own = &classes[c];
            let rebuilt = representative(
                method,
                &own.members,
                Some(h),
                own.scores.as_deref(),
                params,
                opts,
            )?;
            let reps = classes.iter().enumerate().map(|(k, class)| {
                let rep = if k == c { &rebuilt } else { &class.full };
                (class.label.as_str(), rep)
            });
            let got = nearest(reps, own.members[h], method.measure(), params)?;
            Ok(usize::from(got != own.label))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(wrong.into_iter().sum())
}

/// Stiffness from `grid` with the fewest leave-one-out errors; ties go to
/// the smallest value. Returns the chosen value and the per-candidate
/// error counts in grid order.
pub fn loo_tune_nu_with(
    train: &LabeledDataset,
    method: Method,
    grid: &[f64],
    corridor_radius: Option<usize>,
    opts: &BuildOptions,
) -> Result<(f64, Vec<usize>)> {
    if !method.uses_kernel() {
        return Err(Error::InvalidParameter(format!(
            "method '{method}' has no stiffness to tune"
        )));
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty stiffness grid".into()));
    }
    let mut errors = Vec::with_capacity(grid.len());
    for &nu in grid {
        let mut params = KernelParams::new(nu)?;
        if let Some(r) = corridor_radius {
            params = params.with_corridor(r);
        }
        errors.push(loo_errors(train, method, &params, opts)?);
    }
    let best = grid
        .iter()
        .zip(&errors)
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.total_cmp(b.0)))
        .map(|(&nu, _)| nu)
        .expect("non-empty grid");
    Ok((best, errors))
}

/// [`loo_tune_nu_with`] without a corridor and with default build options.
pub fn loo_tune_nu(train: &LabeledDataset, method: Method, grid: &[f64]) -> Result<f64> {
    loo_tune_nu_with(train, method, grid, None, &BuildOptions::default()).map(|(nu, _)| nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::build_representatives;
    use crate::params::DEFAULT_NU_GRID;

    fn uni(v: Vec<f64>) -> TimeSeries {
        TimeSeries::univariate(v).unwrap()
    }

    fn small_train() -> LabeledDataset {
        let mut entries = Vec::new();
        for k in 0..4 {
            let s = 0.1 * k as f64;
            entries.push(("up".to_string(), uni(vec![0.0, s, 1.0, 2.0, 1.0])));
            entries.push(("down".to_string(), uni(vec![0.0, -s, -1.0, -2.0, 0.5 * s])));
        }
        LabeledDataset::new(entries).unwrap()
    }

    #[test]
    fn single_value_grid() {
        for method in [Method::KdtwMedoid, Method::Ikdba, Method::PkdtwPwa] {
            assert_eq!(loo_tune_nu(&small_train(), method, &[2.0]).unwrap(), 2.0);
        }
    }

    #[test]
    fn ties_pick_smallest_value() {
        // Separable classes: every candidate makes zero errors.
        let grid = [5.0, 0.5, 0.05, 1.0];
        let (nu, errors) =
            loo_tune_nu_with(&small_train(), Method::KdtwMedoid, &grid, None, &BuildOptions::default())
                .unwrap();
        assert_eq!(errors, vec![0; 4]);
        assert_eq!(nu, 0.05);
        assert_eq!(DEFAULT_NU_GRID.len(), 11);
    }

    #[test]
    fn singleton_class_is_infeasible() {
        let train = LabeledDataset::new(vec![
            ("a".into(), uni(vec![0.0, 1.0])),
            ("a".into(), uni(vec![0.0, 2.0])),
            ("lonely".into(), uni(vec![5.0, 5.0])),
        ])
        .unwrap();
        assert_eq!(
            loo_tune_nu(&train, Method::Ikdba, &[1.0]),
            Err(Error::LooInfeasible {
                label: "lonely".into()
            })
        );
        assert!(loo_tune_nu(&train, Method::Dba, &[1.0]).is_err());
    }

    #[test]
    fn cached_rebuild_matches_full_recomputation() {
        let train = LabeledDataset::new(vec![
            ("a".into(), uni(vec![0.0, 1.0, 0.2, 0.0])),
            ("a".into(), uni(vec![0.0, 0.0, 1.1, 0.0])),
            ("a".into(), uni(vec![0.3, 0.9, 0.0, 0.0])),
            ("b".into(), uni(vec![0.0, 0.5, 0.5, 0.4])),
            ("b".into(), uni(vec![1.0, 0.0, 0.0, 0.7])),
            ("b".into(), uni(vec![0.2, 0.2, 0.6, 0.1])),
        ])
        .unwrap();
        let params = KernelParams::new(1.0).unwrap();
        let opts = BuildOptions::default();
        for method in [Method::KdtwMedoid, Method::Ikdba, Method::PkdtwPwa, Method::DtwMedoid] {
            let mut naive = 0;
            for h in 0..train.len() {
                let rest: Vec<_> = train
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != h)
                    .map(|(_, e)| e.clone())
                    .collect();
                let reps =
                    build_representatives(&LabeledDataset::new(rest).unwrap(), method, &params, &opts)
                        .unwrap();
                let (label, x) = &train.entries()[h];
                // Other classes keep their full-data representative.
                let full = build_representatives(&train, method, &params, &opts).unwrap();
                let mixed: Vec<(&str, &TimeSeries)> = full
                    .entries()
                    .iter()
                    .map(|(l, s)| if l == label { (l.as_str(), reps.get(l).unwrap()) } else { (l.as_str(), s) })
                    .collect();
                let got = nearest(mixed.into_iter(), x, method.measure(), &params).unwrap();
                naive += usize::from(got != label);
            }
            assert_eq!(loo_errors(&train, method, &params, &opts).unwrap(), naive, "{method}");
        }
    }
}
