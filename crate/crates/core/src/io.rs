//! Text formats for datasets and series.
//!
//! * UCR: one series per line, `label, v1, v2, ..., vT`, separated by
//!   commas, tabs or spaces.
//! * Multivariate: a `#dims D` header, then records separated by blank
//!   lines, each a label line followed by `T` rows of `D` numbers.
//! * Series CSV: one row per timestamp, `d` comma-separated columns.
//!
//! Numbers are written with the shortest representation that parses back
//! to the same double.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{LabeledDataset, TimeSeries};

fn split_fields(line: &str) -> impl Iterator<Item = &str> {
    line.split([',', '\t', ' ', '\r'])
        .filter(|f| !f.is_empty())
}

fn parse_value(field: &str) -> std::result::Result<f64, String> {
    let v: f64 = field
        .parse()
        .map_err(|_| format!("not a number: {field:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite value: {field:?}"))
    }
}

/// Parses UCR-style text into a scalar-series dataset, in file order.
pub fn parse_ucr(text: &str) -> Result<LabeledDataset> {
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let mut fields = split_fields(line);
        let Some(label) = fields.next() else {
            continue;
        };
        let values = fields
            .map(parse_value)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|message| Error::Parse {
                line: lineno,
                message,
            })?;
        if values.is_empty() {
            return Err(Error::Parse {
                line: lineno,
                message: "a label without values".into(),
            });
        }
        let series = TimeSeries::univariate(values).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        entries.push((label.to_string(), series));
    }
    LabeledDataset::new(entries)
}

/// Parses the multivariate record format.
pub fn parse_multivariate(text: &str) -> Result<LabeledDataset> {
    let mut lines = text.lines().map(str::trim).skip_while(|l| l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("missing `#dims D` header".into()))?;
    let dims: usize = header
        .strip_prefix("#dims")
        .map(str::trim)
        .and_then(|d| d.parse().ok())
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Format(format!("expected `#dims D` header, found {header:?}")))?;

    let mut entries = Vec::new();
    let mut current: Option<(String, Vec<f64>)> = None;
    let finish = |rec: (String, Vec<f64>), entries: &mut Vec<(String, TimeSeries)>| {
        let record = entries.len() + 1;
        let (label, data) = rec;
        if data.is_empty() {
            return Err(Error::Record {
                record,
                message: format!("record {label:?} has no samples"),
            });
        }
        let len = data.len() / dims;
        let series = TimeSeries::new(data, len, dims).map_err(|e| Error::Record {
            record,
            message: e.to_string(),
        })?;
        entries.push((label, series));
        Ok(())
    };

    for line in lines {
        if line.is_empty() {
            if let Some(rec) = current.take() {
                finish(rec, &mut entries)?;
            }
            continue;
        }
        match current.as_mut() {
            None => current = Some((line.to_string(), Vec::new())),
            Some((_, data)) => {
                let record = entries.len() + 1;
                let row = split_fields(line)
                    .map(parse_value)
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|message| Error::Record { record, message })?;
                if row.len() != dims {
                    return Err(Error::Record {
                        record,
                        message: format!("row has {} values, header declares {dims}", row.len()),
                    });
                }
                data.extend(row);
            }
        }
    }
    if let Some(rec) = current.take() {
        finish(rec, &mut entries)?;
    }
    LabeledDataset::new(entries)
}

/// Picks the parser from the content: a leading `#dims` header selects the
/// multivariate format.
pub fn parse_dataset(text: &str) -> Result<LabeledDataset> {
    if text.trim_start().starts_with("#dims") {
        parse_multivariate(text)
    } else {
        parse_ucr(text)
    }
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    parse_dataset(&text)
}

/// Shortest round-trip formatting, switching to exponent notation for very
/// small or very large magnitudes.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// UCR serialization; requires scalar series.
pub fn write_ucr(ds: &LabeledDataset) -> Result<String> {
    if ds.dim() != 1 {
        return Err(Error::Format(format!(
            "UCR format holds scalar series, dataset has d = {}",
            ds.dim()
        )));
    }
    let mut out = String::new();
    for (label, s) in ds.iter() {
        out.push_str(label);
        for &v in s.as_slice() {
            out.push(',');
            out.push_str(&fmt_f64(v));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_multivariate(ds: &LabeledDataset) -> String {
    let mut out = format!("#dims {}\n", ds.dim());
    for (k, (label, s)) in ds.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        out.push_str(label);
        out.push('\n');
        for row in s.rows() {
            let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Writes a dataset in whichever format holds it (UCR for `d = 1`).
pub fn write_dataset(ds: &LabeledDataset) -> String {
    write_ucr(ds).unwrap_or_else(|_| write_multivariate(ds))
}

/// One row per timestamp, `d` columns.
pub fn series_to_csv(s: &TimeSeries) -> String {
    let mut out = String::with_capacity(s.len() * s.dim() * 12);
    for row in s.rows() {
        for (c, &v) in row.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", fmt_f64(v));
        }
        out.push('\n');
    }
    out
}

pub fn series_from_csv(text: &str) -> Result<TimeSeries> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = split_fields(line)
            .map(parse_value)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|message| Error::Parse {
                line: idx + 1,
                message,
            })?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    TimeSeries::from_rows(&rows)
}
