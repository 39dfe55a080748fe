//! Deterministic synthetic datasets for toy experiments and smoke runs.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{LabeledDataset, TimeSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fixture {
    /// Two unit-peak triangles of identical shape, peaking at the 1-based
    /// timestamps `first_peak` and `second_peak`.
    TrianglePair {
        len: usize,
        first_peak: usize,
        second_peak: usize,
        half_width: f64,
    },
    /// A positive halfwave (label `halfwave`) and a sine of `periods`
    /// full periods (label `sine`) of the same length.
    SineHalfwave { len: usize, periods: f64 },
    /// Noisy square waves with three duty cycles (labels `low`, `mid`,
    /// `high`). An approximation, not a reference PWM benchmark generator.
    PwmLike {
        len: usize,
        per_class: usize,
        seed: u64,
    },
    /// Cylinder-bell-funnel series of length 128 (labels `1`, `2`, `3`),
    /// z-normalized per series.
    Cbf { per_class: usize, seed: u64 },
}

impl Fixture {
    pub fn triangle_pair(len: usize, first_peak: usize, second_peak: usize) -> Self {
        Fixture::TrianglePair {
            len,
            first_peak,
            second_peak,
            half_width: 25.0,
        }
    }

    pub fn sine_halfwave(len: usize) -> Self {
        Fixture::SineHalfwave { len, periods: 1.5 }
    }
}

pub const CBF_LENGTH: usize = 128;

fn triangle(len: usize, peak: usize, half_width: f64) -> Vec<f64> {
    (1..=len)
        .map(|t| (1.0 - (t as f64 - peak as f64).abs() / half_width).max(0.0))
        .collect()
}

pub fn synth_fixtures(fixture: &Fixture) -> Result<LabeledDataset> {
    match *fixture {
        Fixture::TrianglePair {
            len,
            first_peak,
            second_peak,
            half_width,
        } => {
            if len == 0 {
                return Err(Error::InvalidParameter("length must be at least 1".into()));
            }
            for peak in [first_peak, second_peak] {
                if !(1..=len).contains(&peak) {
                    return Err(Error::InvalidParameter(format!(
                        "peak center {peak} outside [1, {len}]"
                    )));
                }
            }
            if first_peak == second_peak {
                return Err(Error::InvalidParameter(
                    "triangle peak centers must differ".into(),
                ));
            }
            if !(half_width.is_finite() && half_width > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "half width must be positive, got {half_width}"
                )));
            }
            LabeledDataset::new(vec![
                (
                    "first".into(),
                    TimeSeries::univariate(triangle(len, first_peak, half_width))?,
                ),
                (
                    "second".into(),
                    TimeSeries::univariate(triangle(len, second_peak, half_width))?,
                ),
            ])
        }
        Fixture::SineHalfwave { len, periods } => {
            if len < 2 {
                return Err(Error::InvalidParameter("length must be at least 2".into()));
            }
            if !(periods.is_finite() && periods > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "periods must be positive, got {periods}"
                )));
            }
            let phase = |t: usize| (t as f64) / ((len - 1) as f64);
            let half: Vec<f64> = (0..len).map(|t| (PI * phase(t)).sin().max(0.0)).collect();
            let sine: Vec<f64> = (0..len)
                .map(|t| (2.0 * PI * periods * phase(t)).sin())
                .collect();
            LabeledDataset::new(vec![
                ("halfwave".into(), TimeSeries::univariate(half)?),
                ("sine".into(), TimeSeries::univariate(sine)?),
            ])
        }
        Fixture::PwmLike {
            len,
            per_class,
            seed,
        } => {
            if len < 8 || per_class == 0 {
                return Err(Error::InvalidParameter(
                    "pwm fixture needs len >= 8 and per_class >= 1".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let period = (len / 4).max(2);
            let mut entries = Vec::with_capacity(3 * per_class);
            for (label, duty) in [("low", 0.25), ("mid", 0.5), ("high", 0.75)] {
                for _ in 0..per_class {
                    let shift = rng.gen_range(0..period);
                    let values = (0..len)
                        .map(|t| {
                            let pos = ((t + shift) % period) as f64 / period as f64;
                            let level = if pos < duty { 1.0 } else { -1.0 };
                            let noise: f64 = rng.sample(StandardNormal);
                            level + 0.1 * noise
                        })
                        .collect();
                    entries.push((label.to_string(), TimeSeries::univariate(values)?));
                }
            }
            LabeledDataset::new(entries)
        }
        Fixture::Cbf { per_class, seed } => {
            if per_class == 0 {
                return Err(Error::InvalidParameter("per_class must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut entries = Vec::with_capacity(3 * per_class);
            for _ in 0..per_class {
                for class in 1..=3 {
                    entries.push((class.to_string(), cbf_series(class, &mut rng)?));
                }
            }
            LabeledDataset::new(entries)
        }
    }
}

fn cbf_series(class: u8, rng: &mut ChaCha8Rng) -> Result<TimeSeries> {
    let a = rng.gen_range(16..=32) as f64;
    let b = a + rng.gen_range(32..=96) as f64;
    let eta: f64 = rng.sample(StandardNormal);
    let amp = 6.0 + eta;
    let values = (1..=CBF_LENGTH)
        .map(|t| {
            let t = t as f64;
            let eps: f64 = rng.sample(StandardNormal);
            let inside = if (a..=b).contains(&t) { 1.0 } else { 0.0 };
            let shape = match class {
                1 => 1.0,
                2 => (t - a) / (b - a),
                _ => (b - t) / (b - a),
            };
            amp * inside * shape + eps
        })
        .collect();
    Ok(TimeSeries::univariate(values)?.z_normalized())
}
