//! Plain double-precision recursions with no stabilization.
//!
//! Only usable on short series (they underflow around a few hundred
//! samples); kept as a cross-check of the log-domain routines.

use super::{check_dims, sq_dist};
use crate::error::Result;
use crate::params::KernelParams;
use crate::series::TimeSeries;

/// `(p+1) x (q+1)` forward matrix of the `K^xy` recursion, row-major.
pub fn forward_matrix(x: &TimeSeries, y: &TimeSeries, params: &KernelParams) -> Result<Vec<f64>> {
    check_dims(x, y)?;
    params.check_feasible(x.len(), y.len())?;
    let (p, q) = (x.len(), y.len());
    let w = q + 1;
    let nu = params.nu();
    let mut m = vec![0.0; (p + 1) * w];
    m[0] = 1.0;
    for i in 1..=p {
        for j in 1..=q {
            if !params.admits(i, j) {
                continue;
            }
            let local = (-nu * sq_dist(x.row(i - 1), y.row(j - 1))).exp() / 3.0;
            m[i * w + j] = local * (m[(i - 1) * w + j] + m[(i - 1) * w + j - 1] + m[i * w + j - 1]);
        }
    }
    Ok(m)
}

/// KDTW evaluated directly from both recursions.
pub fn kdtw(x: &TimeSeries, y: &TimeSeries, params: &KernelParams) -> Result<f64> {
    let kxy = forward_matrix(x, y, params)?;
    let (p, q) = (x.len(), y.len());
    let w = q + 1;
    let nu = params.nu();
    let diag = |t: usize| {
        if t <= p.min(q) {
            (-nu * sq_dist(x.row(t - 1), y.row(t - 1))).exp()
        } else {
            0.0
        }
    };
    let mut kxx = vec![0.0; (p + 1) * w];
    kxx[0] = 1.0;
    for i in 1..=p {
        for j in 1..=q {
            if !params.admits(i, j) {
                continue;
            }
            let mut sum = kxx[(i - 1) * w + j] * diag(i) + kxx[i * w + j - 1] * diag(j);
            if i == j {
                sum += kxx[(i - 1) * w + j - 1] * (-nu * sq_dist(x.row(i - 1), y.row(j - 1))).exp();
            }
            kxx[i * w + j] = sum / 3.0;
        }
    }
    Ok(kxy[p * w + q] + kxx[p * w + q])
}
