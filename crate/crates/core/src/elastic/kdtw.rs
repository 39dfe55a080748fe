//! KDTW in the log domain.
//!
//! Both recursions keep `ln K` per cell and combine predecessors with an
//! exact log-sum-exp, so long series never underflow. Local weights are
//! `(1/3) exp(-nu d^2)` with `d^2` the squared Euclidean distance.

use super::{check_dims, log_add_exp, log_sum_exp3, sq_dist, LN_THIRD};
use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::series::TimeSeries;

/// A non-negative kernel value held as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct KernelValue(f64);

impl KernelValue {
    pub fn from_ln(ln: f64) -> Self {
        Self(ln)
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    /// The plain value. Fails when it is not representable as a positive
    /// double.
    pub fn value(self) -> Result<f64> {
        let v = self.0.exp();
        if v == 0.0 && self.0 > f64::NEG_INFINITY {
            return Err(Error::Underflow(format!(
                "kernel value exp({:.3}) is below the double range",
                self.0
            )));
        }
        Ok(v)
    }
}

/// Forward matrix of the `K^xy` recursion, `(p+1) x (q+1)` cells holding
/// `ln AM(i, j)`.
///
/// Cell `(0, 0)` is 1, the other border cells and cells gated out by a
/// corridor are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardMatrix {
    ln: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl ForwardMatrix {
    /// Number of samples of the first series (`p`).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of samples of the second series (`q`).
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `ln AM(i, j)` for `0 <= i <= p`, `0 <= j <= q`.
    #[inline]
    pub fn ln(&self, i: usize, j: usize) -> f64 {
        self.ln[i * (self.cols + 1) + j]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.ln(i, j).exp()
    }
}

pub(crate) fn forward_ln(
    x: &TimeSeries,
    y: &TimeSeries,
    nu: f64,
    admits: impl Fn(usize, usize) -> bool,
) -> ForwardMatrix {
    let (p, q) = (x.len(), y.len());
    let w = q + 1;
    let mut ln = vec![f64::NEG_INFINITY; (p + 1) * w];
    ln[0] = 0.0;
    for i in 1..=p {
        let xi = x.row(i - 1);
        for j in 1..=q {
            if !admits(i, j) {
                continue;
            }
            let prev = log_sum_exp3(ln[(i - 1) * w + j], ln[(i - 1) * w + j - 1], ln[i * w + j - 1]);
            ln[i * w + j] = LN_THIRD - nu * sq_dist(xi, y.row(j - 1)) + prev;
        }
    }
    ForwardMatrix {
        ln,
        rows: p,
        cols: q,
    }
}

/// `K^xy` forward matrix of `(x, y)`: cell `(i, j)` sums the weights of all
/// partial alignment paths from `(1, 1)` to `(i, j)`.
pub fn forward_matrix(x: &TimeSeries, y: &TimeSeries, params: &KernelParams) -> Result<ForwardMatrix> {
    check_dims(x, y)?;
    params.check_feasible(x.len(), y.len())?;
    Ok(forward_ln(x, y, params.nu(), |i, j| params.admits(i, j)))
}

/// KDTW similarity `K^xy(p, q) + K^xx(p, q)`.
///
/// The `K^xx` vertical and horizontal terms use the diagonal weights
/// `exp(-nu d^2(x(t), y(t)))` at `t = i` and `t = j` respectively; those
/// weights are 0 past the shorter series. The diagonal `K^xx` term only
/// exists on `i = j`.
pub fn kdtw(x: &TimeSeries, y: &TimeSeries, params: &KernelParams) -> Result<KernelValue> {
    check_dims(x, y)?;
    let (p, q) = (x.len(), y.len());
    params.check_feasible(p, q)?;
    let nu = params.nu();
    let ninf = f64::NEG_INFINITY;

    let shared = p.min(q);
    // diag[t] = ln exp(-nu d^2(x(t), y(t))), 1-based, -inf past `shared`.
    let mut diag = vec![ninf; p.max(q) + 1];
    for (t, slot) in diag.iter_mut().enumerate().take(shared + 1).skip(1) {
        *slot = -nu * sq_dist(x.row(t - 1), y.row(t - 1));
    }

    let mut xy_prev = vec![ninf; q + 1];
    let mut xx_prev = vec![ninf; q + 1];
    let mut xy_cur = vec![ninf; q + 1];
    let mut xx_cur = vec![ninf; q + 1];
    xy_prev[0] = 0.0;
    xx_prev[0] = 0.0;

    for i in 1..=p {
        let xi = x.row(i - 1);
        xy_cur[0] = ninf;
        xx_cur[0] = ninf;
        for j in 1..=q {
            if !params.admits(i, j) {
                xy_cur[j] = ninf;
                xx_cur[j] = ninf;
                continue;
            }
            let local = -nu * sq_dist(xi, y.row(j - 1));
            xy_cur[j] = LN_THIRD + local + log_sum_exp3(xy_prev[j], xy_prev[j - 1], xy_cur[j - 1]);

            let vertical = xx_prev[j] + diag[i];
            let diagonal = if i == j { xx_prev[j - 1] + local } else { ninf };
            let horizontal = xx_cur[j - 1] + diag[j];
            xx_cur[j] = LN_THIRD + log_sum_exp3(vertical, diagonal, horizontal);
        }
        std::mem::swap(&mut xy_prev, &mut xy_cur);
        std::mem::swap(&mut xx_prev, &mut xx_cur);
    }
    Ok(KernelValue(log_add_exp(xy_prev[q], xx_prev[q])))
}

/// `kdtw(x, y) / sqrt(kdtw(x, x) kdtw(y, y))`, for diagnostics.
pub fn kdtw_normalized(x: &TimeSeries, y: &TimeSeries, params: &KernelParams) -> Result<f64> {
    let xy = kdtw(x, y, params)?.ln();
    let xx = kdtw(x, x, params)?.ln();
    let yy = kdtw(y, y, params)?.ln();
    Ok((xy - 0.5 * (xx + yy)).exp())
}
