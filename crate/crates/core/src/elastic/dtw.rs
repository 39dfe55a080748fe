use serde::{Deserialize, Serialize};

use super::{check_dims, sq_dist};
use crate::error::Result;
use crate::series::TimeSeries;

/// Monotone staircase of 1-based index pairs from `(1, 1)` to `(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentPath {
    steps: Vec<(usize, usize)>,
}

impl AlignmentPath {
    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Checks the end points and the unit step set for a `p x q` grid.
    pub fn is_valid(&self, p: usize, q: usize) -> bool {
        self.steps.first() == Some(&(1, 1))
            && self.steps.last() == Some(&(p, q))
            && self.steps.windows(2).all(|w| {
                let (i, j) = w[0];
                matches!(w[1], (a, b) if (a, b) == (i + 1, j) || (a, b) == (i, j + 1) || (a, b) == (i + 1, j + 1))
            })
    }
}

/// DTW cost under squared Euclidean local cost, and one optimal path.
///
/// Backtracking prefers the diagonal predecessor, then `(i-1, j)`, then
/// `(i, j-1)` when several achieve the minimum.
pub fn dtw(x: &TimeSeries, y: &TimeSeries) -> Result<(f64, AlignmentPath)> {
    check_dims(x, y)?;
    let (p, q) = (x.len(), y.len());
    let w = q + 1;
    let mut acc = vec![f64::INFINITY; (p + 1) * w];
    acc[0] = 0.0;
    for i in 1..=p {
        let xi = x.row(i - 1);
        for j in 1..=q {
            let best = acc[(i - 1) * w + j - 1]
                .min(acc[(i - 1) * w + j])
                .min(acc[i * w + j - 1]);
            acc[i * w + j] = sq_dist(xi, y.row(j - 1)) + best;
        }
    }

    let mut steps = Vec::with_capacity(p + q);
    let (mut i, mut j) = (p, q);
    steps.push((i, j));
    while (i, j) != (1, 1) {
        let diag = acc[(i - 1) * w + j - 1];
        let up = acc[(i - 1) * w + j];
        let left = acc[i * w + j - 1];
        let mut next = (i - 1, j - 1, diag);
        if up < next.2 {
            next = (i - 1, j, up);
        }
        if left < next.2 {
            next = (i, j - 1, left);
        }
        (i, j) = (next.0, next.1);
        steps.push((i, j));
    }
    steps.reverse();
    Ok((acc[p * w + q], AlignmentPath { steps }))
}

/// DTW cost only, in `O(q)` memory.
pub fn dtw_cost(x: &TimeSeries, y: &TimeSeries) -> Result<f64> {
    check_dims(x, y)?;
    let q = y.len();
    let mut prev = vec![f64::INFINITY; q + 1];
    let mut cur = vec![f64::INFINITY; q + 1];
    prev[0] = 0.0;
    for xi in x.rows() {
        cur[0] = f64::INFINITY;
        for j in 1..=q {
            let best = prev[j - 1].min(prev[j]).min(cur[j - 1]);
            cur[j] = sq_dist(xi, y.row(j - 1)) + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[q])
}
