use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt_f64;

/// Mid-ranks of `errors` in ascending order: the best value gets rank 1 and
/// tied values share the mean of the positions they occupy.
pub fn ranks(errors: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..errors.len()).collect();
    order.sort_by(|&a, &b| errors[a].total_cmp(&errors[b]));
    let mut out = vec![0.0; errors.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && errors[order[end]] == errors[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end.
        let rank = (start + 1 + end) as f64 / 2.0;
        for &k in &order[start..end] {
            out[k] = rank;
        }
        start = end;
    }
    out
}

/// Mean rank per method over a datasets-by-methods error matrix.
pub fn average_rank(matrix: &[Vec<Option<f64>>]) -> Result<Vec<f64>> {
    let first = matrix
        .first()
        .ok_or_else(|| Error::IncompleteMatrix("no datasets".into()))?;
    let m = first.len();
    if m == 0 {
        return Err(Error::IncompleteMatrix("no methods".into()));
    }
    let mut totals = vec![0.0; m];
    for (d, row) in matrix.iter().enumerate() {
        if row.len() != m {
            return Err(Error::IncompleteMatrix(format!(
                "dataset {} has {} entries, expected {m}",
                d + 1,
                row.len()
            )));
        }
        let values = row
            .iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    Error::IncompleteMatrix(format!("dataset {}, method {} is missing", d + 1, k + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        for (t, r) in totals.iter_mut().zip(ranks(&values)) {
            *t += r;
        }
    }
    let n = matrix.len() as f64;
    Ok(totals.into_iter().map(|t| t / n).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub method: String,
    pub error_pct: f64,
}

/// Test error rates per dataset and method.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    rows: Vec<ReportRow>,
}

impl EvalReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, dataset: &str, method: &str, error_pct: f64) -> Result<()> {
        if !(0.0..=100.0).contains(&error_pct) {
            return Err(Error::InvalidParameter(format!(
                "error rate {error_pct} outside [0, 100]"
            )));
        }
        self.rows.push(ReportRow {
            dataset: dataset.to_string(),
            method: method.to_string(),
            error_pct,
        });
        Ok(())
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    /// `dataset,method,error_pct` lines in insertion order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dataset,method,error_pct\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", r.dataset, r.method, fmt_f64(r.error_pct));
        }
        out
    }

    /// Datasets and methods in first-seen order with the error matrix.
    pub fn matrix(&self) -> (Vec<String>, Vec<String>, Vec<Vec<Option<f64>>>) {
        let mut datasets: Vec<String> = Vec::new();
        let mut methods: Vec<String> = Vec::new();
        for r in &self.rows {
            if !datasets.contains(&r.dataset) {
                datasets.push(r.dataset.clone());
            }
            if !methods.contains(&r.method) {
                methods.push(r.method.clone());
            }
        }
        let mut cells = vec![vec![None; methods.len()]; datasets.len()];
        for r in &self.rows {
            let d = datasets.iter().position(|x| x == &r.dataset).unwrap();
            let m = methods.iter().position(|x| x == &r.method).unwrap();
            cells[d][m] = Some(r.error_pct);
        }
        (datasets, methods, cells)
    }

    pub fn average_ranks(&self) -> Result<Vec<(String, f64)>> {
        let (_, methods, cells) = self.matrix();
        let avg = average_rank(&cells)?;
        Ok(methods.into_iter().zip(avg).collect())
    }

    /// `method,average_rank` lines.
    pub fn rank_csv(&self) -> Result<String> {
        let mut out = String::from("method,average_rank\n");
        for (m, r) in self.average_ranks()? {
            let _ = writeln!(out, "{m},{}", fmt_f64(r));
        }
        Ok(out)
    }
}
