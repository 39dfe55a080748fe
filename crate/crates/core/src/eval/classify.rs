use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::medoid::{medoid_from_scores, pairwise_scores};
use crate::averaging::{dba, ikdba, pkdtw_pwa, InertiaMeasure, PairOrdering, DEFAULT_MAX_ITER};
use crate::elastic::{check_dims, dtw_cost, kdtw};
use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::preimage::{preimage_centroid, PreimageConfig};
use crate::series::{LabeledDataset, TimeSeries};

/// How each class is summarized before nearest-representative
/// classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DtwMedoid,
    Dba,
    KdtwMedoid,
    Ikdba,
    PkdtwPwa,
    Preimage,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::DtwMedoid,
        Method::Dba,
        Method::KdtwMedoid,
        Method::Ikdba,
        Method::PkdtwPwa,
        Method::Preimage,
    ];

    /// Measure used both to build and to match representatives.
    pub fn measure(self) -> InertiaMeasure {
        match self {
            Method::DtwMedoid | Method::Dba => InertiaMeasure::DtwDistance,
            _ => InertiaMeasure::KdtwSimilarity,
        }
    }

    /// Whether the kernel stiffness affects this method.
    pub fn uses_kernel(self) -> bool {
        self.measure() == InertiaMeasure::KdtwSimilarity
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::DtwMedoid => "dtw-medoid",
            Method::Dba => "dba",
            Method::KdtwMedoid => "kdtw-medoid",
            Method::Ikdba => "ikdba",
            Method::PkdtwPwa => "ppwa",
            Method::Preimage => "preimage",
        }
    }

    fn needs_medoid(self) -> bool {
        !matches!(self, Method::PkdtwPwa)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        match key.as_str() {
            "dtw-medoid" => Ok(Method::DtwMedoid),
            "dba" => Ok(Method::Dba),
            "kdtw-medoid" => Ok(Method::KdtwMedoid),
            "ikdba" => Ok(Method::Ikdba),
            "ppwa" | "pkdtw-pwa" => Ok(Method::PkdtwPwa),
            "preimage" => Ok(Method::Preimage),
            _ => Err(Error::InvalidParameter(format!("unknown method '{s}'"))),
        }
    }
}

/// Knobs of the representative builders that are not the kernel itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildOptions {
    pub max_iter: usize,
    pub ordering: PairOrdering,
    pub preimage: PreimageConfig,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            max_iter: DEFAULT_MAX_ITER,
            ordering: PairOrdering::InputOrder,
            preimage: PreimageConfig::default(),
        }
    }
}

/// Representative of `members` (minus `exclude`). `scores` is the pairwise
/// matrix of the full member list under the method's measure, if cached.
pub(crate) fn representative(
    method: Method,
    members: &[&TimeSeries],
    exclude: Option<usize>,
    scores: Option<&[f64]>,
    params: &KernelParams,
    opts: &BuildOptions,
) -> Result<TimeSeries> {
    let reduced: Vec<&TimeSeries> = members
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != exclude)
        .map(|(_, s)| *s)
        .collect();
    if reduced.is_empty() {
        return Err(Error::EmptySet);
    }
    if method == Method::PkdtwPwa {
        return pkdtw_pwa(&reduced, params, opts.ordering);
    }

    debug_assert!(method.needs_medoid());
    let owned;
    let scores = match scores {
        Some(s) => s,
        None => {
            owned = pairwise_scores(members, method.measure(), params)?;
            &owned
        }
    };
    let idx = medoid_from_scores(scores, members.len(), method.measure(), exclude)
        .ok_or(Error::EmptySet)?;
    let init = members[idx];
    match method {
        Method::DtwMedoid | Method::KdtwMedoid => Ok(init.clone()),
        Method::Dba => dba(&reduced, opts.max_iter, init).map(|r| r.centroid),
        Method::Ikdba => ikdba(&reduced, params, opts.max_iter, init).map(|r| r.centroid),
        Method::Preimage => {
            preimage_centroid(&reduced, params, &opts.preimage, init).map(|r| r.centroid)
        }
        Method::PkdtwPwa => unreachable!(),
    }
}

/// One representative per training label, in label order.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentativeSet {
    entries: Vec<(String, TimeSeries)>,
    measure: InertiaMeasure,
    params: KernelParams,
}

impl RepresentativeSet {
    /// Entries are sorted by label; labels must be unique.
    pub fn new(
        mut entries: Vec<(String, TimeSeries)>,
        measure: InertiaMeasure,
        params: KernelParams,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySet);
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("duplicate representative label".into()));
        }
        let dim = entries[0].1.dim();
        if let Some((_, s)) = entries.iter().find(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
        Ok(Self {
            entries,
            measure,
            params,
        })
    }

    pub fn entries(&self) -> &[(String, TimeSeries)] {
        &self.entries
    }

    pub fn measure(&self) -> InertiaMeasure {
        self.measure
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn get(&self, label: &str) -> Option<&TimeSeries> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, s)| s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Builds a representative for every class of `train`.
pub fn build_representatives(
    train: &LabeledDataset,
    method: Method,
    params: &KernelParams,
    opts: &BuildOptions,
) -> Result<RepresentativeSet> {
    let labels = train.labels();
    let entries = labels
        .par_iter()
        .map(|label| {
            let members = train.class(label);
            representative(method, &members, None, None, params, opts).map(|r| (label.clone(), r))
        })
        .collect::<Result<Vec<_>>>()?;
    RepresentativeSet::new(entries, method.measure(), *params)
}

/// Label of the best-scoring representative; earlier entries win ties.
pub(crate) fn nearest<'a>(
    reps: impl Iterator<Item = (&'a str, &'a TimeSeries)>,
    x: &TimeSeries,
    measure: InertiaMeasure,
    params: &KernelParams,
) -> Result<&'a str> {
    let mut best: Option<(&str, f64)> = None;
    for (label, rep) in reps {
        check_dims(rep, x)?;
        // Both branches produce a "lower is better" score.
        let score = match measure {
            InertiaMeasure::DtwDistance => dtw_cost(x, rep)?,
            InertiaMeasure::KdtwSimilarity => -kdtw(x, rep, params)?.ln(),
        };
        if best.is_none_or(|(_, b)| score < b) {
            best = Some((label, score));
        }
    }
    best.map(|(l, _)| l).ok_or(Error::EmptySet)
}

/// First-nearest-centroid rule: label of the closest (distance mode) or
/// most similar (similarity mode) representative. Ties go to the
/// lexicographically smallest label.
pub fn classify_1nc(reps: &RepresentativeSet, x: &TimeSeries) -> Result<String> {
    nearest(
        reps.entries.iter().map(|(l, s)| (l.as_str(), s)),
        x,
        reps.measure,
        &reps.params,
    )
    .map(str::to_owned)
}

/// Percentage of misclassified test items.
pub fn error_rate(reps: &RepresentativeSet, test: &LabeledDataset) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let wrong = test
        .entries()
        .par_iter()
        .map(|(label, x)| classify_1nc(reps, x).map(|got| usize::from(&got != label)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(100.0 * wrong as f64 / test.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: f64, n: usize) -> TimeSeries {
        TimeSeries::univariate(vec![v; n]).unwrap()
    }

    fn reps(entries: Vec<(&str, TimeSeries)>, measure: InertiaMeasure) -> RepresentativeSet {
        RepresentativeSet::new(
            entries.into_iter().map(|(l, s)| (l.to_string(), s)).collect(),
            measure,
            KernelParams::new(1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn classify_examples() {
        let x = TimeSeries::univariate(vec![0.0, 2.0, 1.0]).unwrap();
        let r = reps(
            vec![("b", x.clone()), ("a", constant(5.0, 3))],
            InertiaMeasure::DtwDistance,
        );
        assert_eq!(classify_1nc(&r, &x).unwrap(), "b");

        let r = reps(
            vec![("zero", constant(0.0, 4)), ("ten", constant(10.0, 4))],
            InertiaMeasure::DtwDistance,
        );
        assert_eq!(classify_1nc(&r, &constant(1.0, 4)).unwrap(), "zero");

        let r = reps(
            vec![("y", constant(1.0, 4)), ("x", constant(1.0, 4))],
            InertiaMeasure::DtwDistance,
        );
        assert_eq!(classify_1nc(&r, &constant(3.0, 4)).unwrap(), "x");
        let r = reps(
            vec![("y", constant(1.0, 4)), ("x", constant(1.0, 4))],
            InertiaMeasure::KdtwSimilarity,
        );
        assert_eq!(classify_1nc(&r, &constant(3.0, 4)).unwrap(), "x");
    }

    #[test]
    fn classify_rejects_dimension_mismatch() {
        let r = reps(vec![("a", constant(0.0, 3))], InertiaMeasure::DtwDistance);
        let x = TimeSeries::new(vec![0.0; 6], 3, 2).unwrap();
        assert!(matches!(
            classify_1nc(&r, &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn error_rate_examples() {
        let r = reps(
            vec![("a", constant(0.0, 3)), ("b", constant(10.0, 3))],
            InertiaMeasure::DtwDistance,
        );
        let test = LabeledDataset::new(vec![
            ("a".into(), constant(0.0, 3)),
            ("b".into(), constant(10.0, 3)),
        ])
        .unwrap();
        assert_eq!(error_rate(&r, &test).unwrap(), 0.0);

        let test = LabeledDataset::new(vec![
            ("a".into(), constant(0.5, 3)),
            ("a".into(), constant(1.0, 3)),
            ("b".into(), constant(9.0, 3)),
            ("b".into(), constant(2.0, 3)),
        ])
        .unwrap();
        assert_eq!(error_rate(&r, &test).unwrap(), 25.0);
    }

    #[test]
    fn builds_one_representative_per_label() {
        let train = LabeledDataset::new(vec![
            ("b".into(), constant(10.0, 3)),
            ("a".into(), constant(0.0, 3)),
            ("a".into(), constant(1.0, 3)),
            ("a".into(), constant(8.0, 3)),
            ("b".into(), constant(11.0, 3)),
        ])
        .unwrap();
        let params = KernelParams::new(0.5).unwrap();
        for method in Method::ALL {
            let mut opts = BuildOptions::default();
            opts.preimage.budget = 60;
            let r = build_representatives(&train, method, &params, &opts).unwrap();
            let labels: Vec<_> = r.entries().iter().map(|(l, _)| l.as_str()).collect();
            assert_eq!(labels, ["a", "b"], "{method}");
            assert_eq!(r.measure(), method.measure());
        }
        let r = build_representatives(&train, Method::DtwMedoid, &params, &BuildOptions::default())
            .unwrap();
        assert_eq!(r.get("a").unwrap(), &constant(1.0, 3));
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("pkdtw_pwa".parse::<Method>().unwrap(), Method::PkdtwPwa);
        assert!("kmeans".parse::<Method>().is_err());
    }
}
