mod common;

use common::{random_series, rng, uni};
use proptest::prelude::*;
use rand::Rng;
use tecentroid::averaging::{dba, ikdba, inertia, kdba, kdtw_pwa, pkdtw_pwa};
use tecentroid::elastic::{ama, dtw_cost, kdtw};
use tecentroid::{synth_fixtures, Fixture, InertiaMeasure, KernelParams, PairOrdering, TimeSeries};

fn nu(v: f64) -> KernelParams {
    KernelParams::new(v).unwrap()
}

#[test]
fn kdba_matches_hand_weighted_rows() {
    // R = S_1 = [0, 1]: row i of the output is the through-mass-weighted
    // mean of S_1, with masses taken from path enumeration.
    let r = uni(&[0.0, 1.0]);
    let out = kdba(&r, std::slice::from_ref(&r), &nu(1.0)).unwrap();
    for i in 1..=2 {
        let masses: Vec<f64> = (1..=2).map(|j| common::through_mass(&r, &r, 1.0, i, j)).collect();
        let expected = masses[1] / (masses[0] + masses[1]);
        assert!((out.as_slice()[i - 1] - expected).abs() < 1e-12);
    }
}

#[test]
fn ikdba_singleton_with_stiff_kernel_returns_member() {
    let x = uni(&[0.0, 1.0, -0.5, 2.0, 0.7]);
    let res = ikdba(std::slice::from_ref(&x), &nu(100.0), 20, &x).unwrap();
    for (a, b) in res.centroid.as_slice().iter().zip(x.as_slice()) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn inertia_examples() {
    let c = uni(&[0.0, 1.0, 3.0]);
    let x = uni(&[1.0, 1.0]);
    let y = uni(&[2.0, 0.0, 3.0, 3.0]);
    let params = nu(0.5);
    assert_eq!(inertia(&c, &[&c], InertiaMeasure::DtwDistance, &params).unwrap(), 0.0);
    let k = kdtw(&c, &c, &params).unwrap().value().unwrap();
    let s = inertia(&c, &[&c], InertiaMeasure::KdtwSimilarity, &params).unwrap();
    assert!((s - k).abs() < 1e-15 * k);
    let sum = dtw_cost(&c, &x).unwrap() + dtw_cost(&c, &y).unwrap();
    assert_eq!(inertia(&c, &[&x, &y], InertiaMeasure::DtwDistance, &params).unwrap(), sum);
}

#[test]
fn triangle_pair_is_averaged_along_time() {
    let ds = synth_fixtures(&Fixture::triangle_pair(100, 30, 70)).unwrap();
    let (a, b) = (&ds.series()[0].clone(), &ds.series()[1].clone());
    let avg = kdtw_pwa(a, b, &nu(1.0)).unwrap();
    assert!((avg.argmax(0) as i64 + 1 - 50).abs() <= 1, "argmax {}", avg.argmax(0) + 1);

    let swapped = kdtw_pwa(b, a, &nu(1.0)).unwrap();
    for (u, v) in avg.as_slice().iter().zip(swapped.as_slice()) {
        assert!((u - v).abs() < 1e-12);
    }
    let progressive = pkdtw_pwa(&[a, b], &nu(1.0), PairOrdering::InputOrder).unwrap();
    assert_eq!(progressive, avg);
}

#[test]
fn halfwave_against_sine() {
    let ds = synth_fixtures(&Fixture::sine_halfwave(128)).unwrap();
    let halfwave = ds.class("halfwave")[0];
    let sine = ds.class("sine")[0];
    let params = nu(1.0);

    // Row maxima of the alignment matrix fall into several separate bands.
    let m = ama(halfwave, sine, &params).unwrap();
    let mut cols: Vec<usize> = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            (0..row.len()).fold(0, |best, j| if row[j] > row[best] { j } else { best })
        })
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let bands = 1 + cols.windows(2).filter(|w| w[1] != w[0] + 1).count();
    assert!(bands >= 3, "{bands} bands");

    // The negative lobe of the sine is mostly filtered out.
    let avg = kdtw_pwa(halfwave, sine, &params).unwrap();
    let lowest = |s: &TimeSeries| s.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
    assert!(lowest(&avg) >= 0.5 * lowest(sine));
}

#[test]
fn dba_and_ikdba_traces_are_monotone() {
    let ds = synth_fixtures(&Fixture::Cbf {
        per_class: 6,
        seed: 4,
    })
    .unwrap();
    for label in ["1", "2", "3"] {
        let set = ds.class(label);
        let r = dba(&set, 20, set[0]).unwrap();
        assert!(r.inertia_trace.windows(2).all(|w| w[1] < w[0]));
        assert!(r.iterations_run <= 20);
        let r = ikdba(&set, &nu(0.1), 20, set[0]).unwrap();
        assert!(r.inertia_trace.windows(2).all(|w| w[1] > w[0]));
        assert!(r.iterations_run <= 20);
    }
}

#[test]
fn progressive_output_takes_longest_length() {
    // Deposits reach index (p + q) / 2 at most, so only lengths within one
    // sample of each other cover every output index.
    let mut r = rng(21);
    let set: Vec<TimeSeries> = (0..5)
        .map(|_| {
            let len = r.gen_range(10..=11);
            random_series(&mut r, len, 1)
        })
        .collect();
    let longest = set.iter().map(TimeSeries::len).max().unwrap();
    for ordering in [PairOrdering::InputOrder, PairOrdering::SimilarFirst] {
        assert_eq!(pkdtw_pwa(&set, &nu(1.0), ordering).unwrap().len(), longest);
    }
}

fn small_set() -> impl Strategy<Value = Vec<TimeSeries>> {
    (1usize..=2).prop_flat_map(|d| {
        prop::collection::vec(
            (3usize..=7).prop_flat_map(move |len| {
                prop::collection::vec(-2.0f64..2.0, len * d)
                    .prop_map(move |v| TimeSeries::new(v, len, d).unwrap())
            }),
            1..5,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kdba_is_permutation_invariant(set in small_set(), v in 0.1f64..5.0, shift in 0usize..4) {
        let reference = set[0].clone();
        let mut rotated = set.clone();
        rotated.rotate_left(shift % set.len());
        let a = kdba(&reference, &set, &nu(v)).unwrap();
        let b = kdba(&reference, &rotated, &nu(v)).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn averages_stay_in_sample_range(set in small_set(), v in 0.1f64..5.0) {
        let refs: Vec<&TimeSeries> = set.iter().collect();
        let d = set[0].dim();
        let channel_range = |members: &[&TimeSeries], c: usize| {
            members.iter().flat_map(|s| s.channel(c)).fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), v| (lo.min(v), hi.max(v)),
            )
        };
        let check = |out: &TimeSeries, members: &[&TimeSeries]| {
            (0..d).all(|c| {
                let (lo, hi) = channel_range(members, c);
                out.channel(c).all(|v| v >= lo - 1e-12 && v <= hi + 1e-12)
            })
        };
        let out = kdba(&set[0], &set, &nu(v)).unwrap();
        prop_assert!(check(&out, &refs));
        if set.len() >= 2 {
            if let Ok(out) = kdtw_pwa(&set[0], &set[1], &nu(v)) {
                prop_assert!(check(&out, &refs[..2]));
            }
        }
        if let Ok(out) = pkdtw_pwa(&set, &nu(v), PairOrdering::InputOrder) {
            prop_assert!(check(&out, &refs));
        }
    }
}
