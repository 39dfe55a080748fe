//! Kernelized centroid as a preimage problem.
//!
//! The centroid of `S = {s_1..s_n}` in the KDTW feature space is
//! approximated by the input-space series minimizing
//! `n k(x, x) - 2 sum_j k(x, s_j)`. The kernel has no usable derivative,
//! so the search is a deterministic coordinate pattern search.

use std::borrow::Borrow;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::averaging::{check_set, CentroidResult};
use crate::elastic::kdtw;
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::params::KernelParams;
use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageConfig {
    /// Maximum number of probe evaluations (the initial evaluation is free).
    pub budget: usize,
    pub initial_step: f64,
    pub shrink_factor: f64,
    pub tolerance: f64,
    /// Optional cap on full sweeps; `Some(0)` returns the initial series.
    pub max_sweeps: Option<usize>,
    /// Optional per-channel `(lower, upper)` bounds. Probes outside are
    /// skipped without being evaluated.
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for PreimageConfig {
    fn default() -> Self {
        Self {
            budget: 10_000,
            initial_step: 0.5,
            shrink_factor: 0.5,
            tolerance: 1e-3,
            max_sweeps: None,
            bounds: None,
        }
    }
}

impl PreimageConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget < 1 {
            return Err(Error::InvalidParameter("budget must be at least 1".into()));
        }
        if !(self.shrink_factor > 0.0 && self.shrink_factor < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "shrink factor must lie in (0, 1), got {}",
                self.shrink_factor
            )));
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(Error::InvalidParameter("initial step must be positive".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        if let Some(bounds) = &self.bounds {
            if bounds.iter().any(|(lo, hi)| lo.is_nan() || hi.is_nan() || lo > hi) {
                return Err(Error::InvalidParameter("empty bound interval".into()));
            }
        }
        Ok(())
    }
}

/// `(ln(n k(x,x)), ln(2 sum_j k(x, s_j)))`.
fn objective_terms<T: Borrow<TimeSeries> + Sync>(
    x: &TimeSeries,
    set: &[T],
    params: &KernelParams,
) -> Result<(f64, f64)> {
    let self_ln = kdtw(x, x, params)?.ln();
    let cross = set
        .par_iter()
        .map(|s| kdtw(x, s.borrow(), params).map(|k| k.ln()))
        .collect::<Result<Vec<_>>>()?;
    let cross_ln = cross
        .into_iter()
        .fold(f64::NEG_INFINITY, crate::elastic::log_add_exp);
    Ok(((set.len() as f64).ln() + self_ln, 2f64.ln() + cross_ln))
}

/// `n kdtw(x, x) - 2 sum_j kdtw(x, s_j)`.
pub fn preimage_objective<T: Borrow<TimeSeries> + Sync>(
    x: &TimeSeries,
    set: &[T],
    params: &KernelParams,
) -> Result<f64> {
    check_set(set, x.dim())?;
    let (a, b) = objective_terms(x, set, params)?;
    let v = a.exp() - b.exp();
    if a.exp() == 0.0 && b.exp() == 0.0 {
        return Err(Error::Underflow(
            "preimage objective terms are below the double range".into(),
        ));
    }
    Ok(v)
}

/// Full record of a pattern search.
#[derive(Debug, Clone, PartialEq)]
pub struct PreimageRun {
    pub result: CentroidResult,
    /// Probe evaluation index at which each trace value was reached
    /// (0 for the initial series).
    pub accepted_at: Vec<usize>,
    pub evaluations: usize,
    /// Trace values equal the objective divided by `exp(ln_scale)`;
    /// `ln_scale` is 0 unless the raw objective leaves the double range.
    pub ln_scale: f64,
}

impl PreimageRun {
    /// Two-column CSV: evaluation index, objective.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("evaluation,objective\n");
        for (k, v) in self.accepted_at.iter().zip(&self.result.inertia_trace) {
            let _ = writeln!(out, "{k},{}", fmt_f64(*v));
        }
        out
    }
}

/// Pattern search from `init`; see [`preimage_search`].
pub fn preimage_centroid<T: Borrow<TimeSeries> + Sync>(
    set: &[T],
    params: &KernelParams,
    config: &PreimageConfig,
    init: &TimeSeries,
) -> Result<CentroidResult> {
    preimage_search(set, params, config, init).map(|run| run.result)
}

/// Coordinate pattern search over all `T x d` sample values.
///
/// Coordinates are visited time-major, channel-minor. Each one is probed at
/// `+step` then `-step`; the first strict improvement is accepted. A sweep
/// without any acceptance shrinks the step. The search ends when the
/// budget is spent, the step falls below the tolerance or the sweep cap is
/// reached.
pub fn preimage_search<T: Borrow<TimeSeries> + Sync>(
    set: &[T],
    params: &KernelParams,
    config: &PreimageConfig,
    init: &TimeSeries,
) -> Result<PreimageRun> {
    config.validate()?;
    check_set(set, init.dim())?;
    let (len, d) = (init.len(), init.dim());
    if let Some(bounds) = &config.bounds {
        if bounds.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bounds.len(),
            });
        }
    }

    let (a0, b0) = objective_terms(init, set, params)?;
    let top = a0.max(b0);
    let ln_scale = if top > -700.0 && top < 700.0 { 0.0 } else { top };
    let scaled = |a: f64, b: f64| (a - ln_scale).exp() - (b - ln_scale).exp();

    let mut best = scaled(a0, b0);
    let mut trace = vec![best];
    let mut accepted_at = vec![0];
    let mut evaluations = 0;
    let finish = |x: Vec<f64>, trace, accepted_at, evaluations| -> Result<PreimageRun> {
        Ok(PreimageRun {
            result: CentroidResult {
                centroid: TimeSeries::new(x, len, d)?,
                inertia_trace: trace,
                iterations_run: evaluations,
            },
            accepted_at,
            evaluations,
            ln_scale,
        })
    };

    let mut x = init.as_slice().to_vec();
    if config.max_sweeps == Some(0) {
        return finish(x, trace, accepted_at, evaluations);
    }
    let sweep = 2 * len * d;
    if config.budget < sweep {
        return Err(Error::Budget {
            budget: config.budget,
            sweep,
        });
    }

    let in_bounds = |k: usize, v: f64| match &config.bounds {
        None => true,
        Some(b) => {
            let (lo, hi) = b[k % d];
            (lo..=hi).contains(&v)
        }
    };

    let mut step = config.initial_step;
    let mut sweeps = 0;
    'search: loop {
        if config.max_sweeps.is_some_and(|cap| sweeps >= cap) {
            break;
        }
        let mut improved = false;
        for k in 0..len * d {
            let origin = x[k];
            for delta in [step, -step] {
                if evaluations >= config.budget {
                    break 'search;
                }
                let candidate = origin + delta;
                if !in_bounds(k, candidate) {
                    continue;
                }
                x[k] = candidate;
                evaluations += 1;
                let probe = TimeSeries::new(x.clone(), len, d)?;
                let (a, b) = objective_terms(&probe, set, params)?;
                let value = scaled(a, b);
                if value < best {
                    best = value;
                    trace.push(value);
                    accepted_at.push(evaluations);
                    improved = true;
                    break;
                }
                x[k] = origin;
            }
        }
        sweeps += 1;
        if !improved {
            step *= config.shrink_factor;
            if step < config.tolerance {
                break;
            }
        }
    }
    finish(x, trace, accepted_at, evaluations)
}
