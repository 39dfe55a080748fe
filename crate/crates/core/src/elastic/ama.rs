//! Alignment matrix averages and alignment probabilities.

use std::fmt::Write as _;

use super::kdtw::{forward_ln, ForwardMatrix};
use super::{check_dims, sq_dist, LN_THIRD};
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::params::KernelParams;
use crate::series::TimeSeries;

/// Per-cell mass of the complete alignment paths through `(i, j)`,
/// `p x q`, row-major, 0-based accessors.
///
/// Values are divided by the global maximum, so the largest entry is 1;
/// `ln_scale` is the natural log of that divisor.
#[derive(Debug, Clone, PartialEq)]
pub struct AmaMatrix {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
    ln_scale: f64,
}

impl AmaMatrix {
    /// Wraps explicit values, checking non-negativity and that every row
    /// and every column carries mass.
    pub fn from_values(values: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "{} values do not form a {rows}x{cols} matrix",
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParameter(
                "alignment masses must be finite and non-negative".into(),
            ));
        }
        let m = Self {
            values,
            rows,
            cols,
            ln_scale: 0.0,
        };
        m.check_support()?;
        Ok(m)
    }

    fn check_support(&self) -> Result<()> {
        for r in 0..self.rows {
            if self.row(r).iter().all(|&v| v == 0.0) {
                return Err(Error::Underflow(format!("alignment row {} has no mass", r + 1)));
            }
        }
        for c in 0..self.cols {
            if (0..self.rows).all(|r| self.get(r, c) == 0.0) {
                return Err(Error::Underflow(format!(
                    "alignment column {} has no mass",
                    c + 1
                )));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn ln_scale(&self) -> f64 {
        self.ln_scale
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            rows: self.rows,
            cols: self.cols,
            ln_scale: self.ln_scale - factor.ln(),
        }
    }

    /// Dense CSV dump, row `i` = sample `i` of the first series, preceded by
    /// a `# p q nu` header line.
    pub fn to_csv(&self, nu: f64) -> String {
        let mut out = format!("# {} {} {}\n", self.rows, self.cols, fmt_f64(nu));
        for r in 0..self.rows {
            for (c, &v) in self.row(r).iter().enumerate() {
                if c > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", fmt_f64(v));
            }
            out.push('\n');
        }
        out
    }
}

/// Forward matrix of the time-reversed pair, gated by the corridor mapped
/// back to the original coordinates. Cell `(i, j)` sums the partial paths
/// from `(p, q)` back to `(p - i + 1, q - j + 1)`.
pub fn backward_matrix(x: &TimeSeries, y: &TimeSeries, params: &KernelParams) -> Result<ForwardMatrix> {
    check_dims(x, y)?;
    let (p, q) = (x.len(), y.len());
    params.check_feasible(p, q)?;
    Ok(forward_ln(&x.reversed(), &y.reversed(), params.nu(), |i, j| {
        params.admits(p + 1 - i, q + 1 - j)
    }))
}

/// Alignment matrix average of `(x, y)`.
///
/// The forward product `AM(i, j) * AM_r(p-i+1, q-j+1)` counts the local
/// weight of `(i, j)` once from each side; it is divided out once so that
/// each cell holds exactly the mass of complete paths through it.
pub fn ama(x: &TimeSeries, y: &TimeSeries, params: &KernelParams) -> Result<AmaMatrix> {
    let fwd = super::forward_matrix(x, y, params)?;
    let bwd = backward_matrix(x, y, params)?;
    let (p, q) = (x.len(), y.len());
    let nu = params.nu();

    let mut ln = vec![f64::NEG_INFINITY; p * q];
    let mut max = f64::NEG_INFINITY;
    for i in 1..=p {
        let xi = x.row(i - 1);
        for j in 1..=q {
            let a = fwd.ln(i, j);
            let b = bwd.ln(p + 1 - i, q + 1 - j);
            if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
                continue;
            }
            let local = LN_THIRD - nu * sq_dist(xi, y.row(j - 1));
            let v = a + b - local;
            ln[(i - 1) * q + (j - 1)] = v;
            max = max.max(v);
        }
    }
    if !max.is_finite() {
        return Err(Error::Underflow("alignment matrix has no finite cell".into()));
    }
    let values = ln.into_iter().map(|v| (v - max).exp()).collect();
    let m = AmaMatrix {
        values,
        rows: p,
        cols: q,
        ln_scale: max,
    };
    m.check_support()?;
    Ok(m)
}

/// `P(i, j)` with its two conditionals, `p x q`, row-major, 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentProbability {
    joint: Vec<f64>,
    row_conditional: Vec<f64>,
    column_conditional: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl AlignmentProbability {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `P(i, j) = (P(i|j) + P(j|i)) / 2`.
    #[inline]
    pub fn joint(&self, r: usize, c: usize) -> f64 {
        self.joint[r * self.cols + c]
    }

    /// `P(j|i)`: row-normalized mass.
    #[inline]
    pub fn given_row(&self, r: usize, c: usize) -> f64 {
        self.row_conditional[r * self.cols + c]
    }

    /// `P(i|j)`: column-normalized mass.
    #[inline]
    pub fn given_column(&self, r: usize, c: usize) -> f64 {
        self.column_conditional[r * self.cols + c]
    }

    pub fn joint_row(&self, r: usize) -> &[f64] {
        &self.joint[r * self.cols..(r + 1) * self.cols]
    }
}

pub fn alignment_probabilities(m: &AmaMatrix) -> Result<AlignmentProbability> {
    let (rows, cols) = (m.rows(), m.cols());
    let row_sums: Vec<f64> = (0..rows).map(|r| m.row(r).iter().sum()).collect();
    let mut col_sums = vec![0.0; cols];
    for r in 0..rows {
        for (acc, v) in col_sums.iter_mut().zip(m.row(r)) {
            *acc += v;
        }
    }
    if let Some(r) = row_sums.iter().position(|&s| s.is_nan() || s <= 0.0) {
        return Err(Error::DegenerateDistribution(format!("row {} has no mass", r + 1)));
    }
    if let Some(c) = col_sums.iter().position(|&s| s.is_nan() || s <= 0.0) {
        return Err(Error::DegenerateDistribution(format!(
            "column {} has no mass",
            c + 1
        )));
    }

    let mut joint = Vec::with_capacity(rows * cols);
    let mut row_conditional = Vec::with_capacity(rows * cols);
    let mut column_conditional = Vec::with_capacity(rows * cols);
    for (r, row_sum) in row_sums.iter().enumerate() {
        for (c, col_sum) in col_sums.iter().enumerate() {
            let v = m.get(r, c);
            let given_row = v / row_sum;
            let given_col = v / col_sum;
            row_conditional.push(given_row);
            column_conditional.push(given_col);
            joint.push(0.5 * (given_row + given_col));
        }
    }
    Ok(AlignmentProbability {
        joint,
        row_conditional,
        column_conditional,
        rows,
        cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::forward_matrix;

    fn uni(v: &[f64]) -> TimeSeries {
        TimeSeries::univariate(v.to_vec()).unwrap()
    }

    #[test]
    fn single_cell_product() {
        let x = uni(&[0.0]);
        let y = uni(&[1.5]);
        let params = KernelParams::new(1.0).unwrap();
        let fwd = forward_matrix(&x, &y, &params).unwrap();
        let bwd = backward_matrix(&x, &y, &params).unwrap();
        let w = (1.0 / 3.0) * (-2.25f64).exp();
        // Raw product AM(1,1) * AM_r(1,1) is the squared local weight.
        assert!((fwd.value(1, 1) * bwd.value(1, 1) - w * w).abs() < 1e-15);
        let m = ama(&x, &y, &params).unwrap();
        assert_eq!(m.get(0, 0), 1.0);
        assert!((m.ln_scale() - w.ln()).abs() < 1e-14);
    }

    #[test]
    fn probabilities_trivial_cases() {
        let p = alignment_probabilities(&AmaMatrix::from_values(vec![0.3], 1, 1).unwrap()).unwrap();
        assert_eq!(p.joint(0, 0), 1.0);
        let p = alignment_probabilities(&AmaMatrix::from_values(vec![2.0; 4], 2, 2).unwrap()).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(p.joint(r, c), 0.5);
            }
        }
    }

    #[test]
    fn probabilities_are_scale_invariant() {
        let x = uni(&[0.0, 1.0, 0.2, -0.5]);
        let y = uni(&[0.1, 0.8, 0.0]);
        let m = ama(&x, &y, &KernelParams::new(0.5).unwrap()).unwrap();
        let a = alignment_probabilities(&m).unwrap();
        let b = alignment_probabilities(&m.scaled(7.3)).unwrap();
        for r in 0..4 {
            for c in 0..3 {
                assert!((a.joint(r, c) - b.joint(r, c)).abs() < 1e-12);
                assert!((a.given_row(r, c) - b.given_row(r, c)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_rows_are_rejected() {
        assert!(matches!(
            AmaMatrix::from_values(vec![1.0, 0.0, 0.0, 0.0], 2, 2),
            Err(Error::Underflow(_))
        ));
        assert!(AmaMatrix::from_values(vec![-1.0], 1, 1).is_err());
    }

    #[test]
    fn csv_header() {
        let m = ama(&uni(&[0.0]), &uni(&[0.0]), &KernelParams::new(1.0).unwrap()).unwrap();
        assert_eq!(m.to_csv(1.0), "# 1 1 1\n1\n");
    }
}
